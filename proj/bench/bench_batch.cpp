// Times the batch residual sweep in serial and OpenMP mode on one symbolic
// differential. Both modes run the same per-sample arithmetic, so the
// residual vectors must match bitwise; the target reports if they do not.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chaindiff/batch.hpp"
#include "chaindiff/diff.hpp"
#include "chaindiff/fixtures.hpp"
#include "chaindiff/parser.hpp"

using namespace chaindiff;

namespace {

double run_mode(const Expr& symbolic, const ConcreteFunc& q,
                const std::vector<VerifySample>& samples,
                const EvalContext& ctx, BatchMode mode,
                std::vector<double>& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = batch_residuals(symbolic, q, "x", samples, ctx, mode);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n_samples = 400;
  if (argc > 1) n_samples = std::atoi(argv[1]);

  ConcreteFunc q = fixtures::quadratic_form(
      "q", {{2, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 3, 0}, {1, 0, 0, 1}});
  EvalContext ctx;
  ctx.bindings.insert({"q", q});
  Expr symbolic = nth_chain_diff(parse("q(x)"), Expr::point_var("x"), {1});

  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<VerifySample> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    std::vector<double> p(4), d(4);
    for (auto& v : p) v = u(rng);
    for (auto& v : d) v = u(rng);
    samples.push_back({Value::vector(p), {Value::vector(d)}});
  }

  std::vector<double> serial, parallel;
  double ms_serial = run_mode(symbolic, q, samples, ctx, BatchMode::Serial, serial);
  double ms_parallel =
      run_mode(symbolic, q, samples, ctx, BatchMode::Parallel, parallel);

  double worst = 0.0;
  for (double r : serial) worst = std::max(worst, r);
  bool identical = serial == parallel;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif

  std::printf("samples            %d\n", n_samples);
  std::printf("threads            %d\n", threads);
  std::printf("serial             %.2f ms\n", ms_serial);
  std::printf("parallel           %.2f ms\n", ms_parallel);
  std::printf("speedup            %.2fx\n",
              ms_parallel > 0 ? ms_serial / ms_parallel : 0.0);
  std::printf("worst residual     %.3e\n", worst);
  std::printf("bitwise identical  %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
