#pragma once

#include <stdexcept>
#include <string>

namespace chaindiff {

// Malformed tree shapes: arity mismatches, non-function differential targets,
// function/point role mixing.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad call-site inputs: repeated direction indices, unsupported orders,
// size mismatches.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation failures: unbound symbols, space mismatches, missing exact
// differentials with numeric fallback disabled.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(column_)),
        line(line_),
        column(column_) {}
};

}  // namespace chaindiff
