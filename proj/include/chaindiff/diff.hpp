#pragma once

#include <string>
#include <vector>

#include "chaindiff/expr.hpp"

namespace chaindiff {

enum class Rule {
  Chain,
  Total,
  Faa,
  Leibniz,
  Lin,
  Pow,
  Exp,
  Const,
  SumLinearity,
  Atom,
};

const char* rule_name(Rule r);  // "R-CHAIN", "R-TOTAL", ...

struct RuleTrace {
  Rule applied_rule;
  Expr input;
  Expr output;  // always canonical
};

// First-order chain differential of e at `point` in direction
// eta_{direction_index}. Function-valued e is first applied at `point`.
Expr chain_diff(const Expr& e, const Expr& point, int direction_index,
                std::vector<RuleTrace>* trace = nullptr);

// Fold of chain_diff over `directions` in order; empty list is order 0.
Expr nth_chain_diff(const Expr& e, const Expr& point,
                    const std::vector<int>& directions,
                    std::vector<RuleTrace>* trace = nullptr);

// Direct higher-order chain rule: one term per partition of {1..n}, the
// outer differential of f taking one inner differential of g per block.
Expr faa_di_bruno(const Expr& f, const Expr& g, const Expr& point,
                  const std::vector<int>& directions,
                  std::vector<RuleTrace>* trace = nullptr);
// The per-partition summands before they are merged into one canonical sum.
std::vector<Expr> faa_di_bruno_terms(const Expr& f, const Expr& g,
                                     const Expr& point,
                                     const std::vector<int>& directions);

// Direct product rule: one term per subset of {1..n}.
Expr leibniz(const Expr& f, const Expr& g, const Expr& point,
             const std::vector<int>& directions,
             std::vector<RuleTrace>* trace = nullptr);
std::vector<Expr> leibniz_terms(const Expr& f, const Expr& g,
                                const Expr& point,
                                const std::vector<int>& directions);

// Sum of one partial differential per argument slot. A direction index of 0
// stands for the zero direction; those terms vanish.
Expr total_diff(const Expr& f, const std::vector<Expr>& point_tuple,
                const std::vector<int>& direction_tuple,
                std::vector<RuleTrace>* trace = nullptr);

// Rewrites differential terms with composite targets (compositions, sums,
// products of functions) into differentials of atomic symbols, where the
// base is a point variable and all directions are direction variables.
Expr expand_differentials(const Expr& e);

}  // namespace chaindiff
