#pragma once

#include <string>

#include "chaindiff/expr.hpp"

namespace chaindiff {

// Grammar, loosest binding first:
//   expr    := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := unary ('o' unary)*
//   unary   := '-' unary | postfix
//   postfix := primary ('(' expr (',' expr)* ')')*
//   primary := number ['/' number] | 'exp' | 'pow' '[' int ']'
//            | 'lin' '[' ident ']'
//            | 'D' [slots] '[' dirs ']' postfix '@' postfix
//            | direction (e1, e2, ...) | ident | '(' expr (',' expr)* ')'
// Identifiers name function symbols in function position (top level,
// composition operands, differential targets) and point variables elsewhere
// (application arguments, direction lists, after '@'). A bare integer k in a
// differential's direction list means the k-th direction variable, 0 the zero
// direction. Parenthesized lists in point position are tuples.
Expr parse(const std::string& text);

}  // namespace chaindiff
