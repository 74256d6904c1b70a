#pragma once

#include <string>
#include <vector>

#include "chaindiff/numeric.hpp"

namespace chaindiff {

struct VerifySample {
  Value point;
  std::vector<Value> directions;
};

enum class BatchMode { Serial, Parallel };

// Residual |eval(symbolic) - quotient estimate| / (1 + |estimate|) for each
// sample, binding the sample's point and directions into a copy of base_ctx.
// Serial and Parallel produce identical results; Parallel runs the sample
// loop under OpenMP when it is available.
std::vector<double> batch_residuals(const Expr& symbolic,
                                    const ConcreteFunc& target,
                                    const std::string& point_name,
                                    const std::vector<VerifySample>& samples,
                                    const EvalContext& base_ctx, BatchMode mode);

}  // namespace chaindiff
