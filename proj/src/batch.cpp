#include "chaindiff/batch.hpp"

namespace chaindiff {

namespace {

double one_residual(const Expr& symbolic, const ConcreteFunc& target,
                    const std::string& point_name, const VerifySample& sample,
                    const EvalContext& base_ctx) {
  EvalContext ctx = base_ctx;
  ctx.point_values[point_name] = sample.point;
  for (size_t i = 0; i < sample.directions.size(); ++i)
    ctx.direction_values[static_cast<int>(i + 1)] = sample.directions[i];
  Value actual = eval(symbolic, ctx);
  Value expected;
  if (sample.directions.size() == 1) {
    expected = chain_diff_numeric(target, sample.point, sample.directions[0],
                                  default_schemes(sample.directions[0]))
                   .estimate;
  } else {
    expected =
        nth_diff_numeric(target, sample.point, sample.directions, ctx.numeric);
  }
  return (actual - expected).norm() / (1.0 + expected.norm());
}

}  // namespace

std::vector<double> batch_residuals(const Expr& symbolic,
                                    const ConcreteFunc& target,
                                    const std::string& point_name,
                                    const std::vector<VerifySample>& samples,
                                    const EvalContext& base_ctx,
                                    BatchMode mode) {
  std::vector<double> out(samples.size(), 0.0);
  const int n = static_cast<int>(samples.size());
  if (mode == BatchMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      out[i] = one_residual(symbolic, target, point_name, samples[i], base_ctx);
  } else {
    for (int i = 0; i < n; ++i)
      out[i] = one_residual(symbolic, target, point_name, samples[i], base_ctx);
  }
  return out;
}

}  // namespace chaindiff
