// Acceptance gate: nine desk-scale checks, one line of output each.
// Tolerances and runtime bounds are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chaindiff/cli.hpp"
#include "chaindiff/combinatorics.hpp"
#include "chaindiff/diff.hpp"
#include "chaindiff/fixtures.hpp"
#include "chaindiff/numeric.hpp"
#include "chaindiff/parser.hpp"
#include "chaindiff/serialize.hpp"

#include "generators.hpp"

using namespace chaindiff;

namespace {

constexpr double kTolClosedForm = 1e-6;   // criterion 4
constexpr double kTolFirstOrder = 1e-5;   // criterion 5
constexpr double kTolSecond = 1e-4;       // criterion 6, n=2
constexpr double kTolThird = 1e-3;        // criterion 6, n=3
constexpr double kTolScalarFaa = 1e-6;    // criterion 7
constexpr double kTolHomogeneity = 1e-6;  // criterion 8

struct Criterion {
  int id;
  const char* label;
  double time_limit_s;  // 0 = no bound stated
  std::function<void(std::string&)> body;
};

void expect(bool ok, const std::string& what, std::string& fail) {
  if (!ok && fail.empty()) fail = what;
}

bool rel_ok(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

double sc(const Value& v) { return v.scalar_value(); }

std::vector<double> rand_vec(std::mt19937& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(d);
  for (double& x : v) x = u(rng);
  return v;
}

ConcreteFunc wrap_scalar_func(std::string name, ConcreteSpace domain,
                              std::function<Value(const Value&)> f) {
  ConcreteFunc c;
  c.name = std::move(name);
  c.domain = {domain};
  c.codomain = Codomain::real();
  c.evaluate = [f = std::move(f)](const std::vector<Value>& args) {
    return f(args[0]);
  };
  return c;
}

// ---------------------------------------------------------------- criterion 1

std::set<std::string> label_oracle(int n) {
  std::set<std::string> out;
  std::vector<int> labels(n, 0);
  for (;;) {
    Partition p;
    for (int label = 0; label < n; ++label) {
      std::vector<int> block;
      for (int i = 0; i < n; ++i)
        if (labels[i] == label) block.push_back(i + 1);
      if (!block.empty()) p.blocks.push_back(std::move(block));
    }
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.insert(to_string(p));
    int i = n - 1;
    while (i >= 0 && labels[i] == i) labels[i--] = 0;
    if (i < 0) break;
    ++labels[i];
  }
  return out;
}

void criterion1(std::string& fail) {
  const std::int64_t expected[] = {0, 1, 2, 5, 15, 52, 203};
  Expr f = Expr::func_symbol("f");
  Expr g = Expr::func_symbol("g");
  Expr x = Expr::point_var("x");
  std::vector<int> dirs;
  for (int n = 1; n <= 6; ++n) {
    dirs.push_back(n);
    size_t got = faa_di_bruno_terms(f, g, x, dirs).size();
    expect(got == static_cast<size_t>(expected[n]),
           "faa term count n=" + std::to_string(n) + " gave " +
               std::to_string(got),
           fail);
  }
  for (int n = 0; n <= 8; ++n) {
    std::vector<Partition> ps = partitions(n);
    expect(static_cast<std::int64_t>(ps.size()) == bell(n),
           "partition count vs bell at n=" + std::to_string(n), fail);
    std::set<std::string> got;
    for (const Partition& p : ps) got.insert(to_string(p));
    expect(got == label_oracle(n),
           "partition set vs label oracle at n=" + std::to_string(n), fail);
  }
}

// ---------------------------------------------------------------- criterion 2

void criterion2(std::string& fail) {
  Expr f = Expr::func_symbol("f");
  Expr g = Expr::func_symbol("g");
  Expr x = Expr::point_var("x");
  std::vector<int> dirs;
  for (int n = 0; n <= 6; ++n) {
    size_t got = leibniz_terms(f, g, x, dirs).size();
    expect(got == (size_t{1} << n),
           "leibniz term count n=" + std::to_string(n) + " gave " +
               std::to_string(got),
           fail);
    dirs.push_back(n + 1);
  }
}

// ---------------------------------------------------------------- criterion 3

void criterion3(std::string& fail) {
  Expr f = Expr::func_symbol("f");
  Expr g = Expr::func_symbol("g");
  Expr x = Expr::point_var("x");
  Expr comp = Expr::compose(f, g);
  Expr prod = Expr::product({Expr::apply(f, {x}), Expr::apply(g, {x})});
  std::vector<int> dirs;
  for (int n = 1; n <= 4; ++n) {
    dirs.push_back(n);
    expect(structural_equal(nth_chain_diff(comp, x, dirs),
                            faa_di_bruno(f, g, x, dirs)),
           "recursive vs partition expansion at n=" + std::to_string(n), fail);
    expect(structural_equal(nth_chain_diff(prod, x, dirs),
                            leibniz(f, g, x, dirs)),
           "recursive vs subset expansion at n=" + std::to_string(n), fail);
  }
}

// ---------------------------------------------------------------- criterion 4

void criterion4(std::string& fail) {
  Expr g = Expr::func_symbol("g");
  Expr x = Expr::point_var("x");
  Expr gx = Expr::apply(g, {x});
  Expr dg = Expr::diff(g, x, {Expr::direction_var(1)});

  // closed forms, structurally
  expect(structural_equal(
             chain_diff(Expr::compose(Expr::linear("l"), g), x, 1),
             Expr::apply(Expr::linear("l"), {dg})),
         "linear closed form", fail);
  expect(structural_equal(chain_diff(Expr::compose(Expr::exp_fn(), g), x, 1),
                          Expr::product(
                              {Expr::apply(Expr::exp_fn(), {gx}), dg})),
         "exp closed form", fail);
  for (int k = 1; k <= 5; ++k) {
    Expr got = chain_diff(Expr::compose(Expr::power(k), g), x, 1);
    Expr want =
        k == 1 ? dg
               : Expr::product({Expr::scalar(static_cast<std::int64_t>(k)),
                                Expr::apply(Expr::power(k - 1), {gx}), dg});
    expect(structural_equal(got, want),
           "power closed form k=" + std::to_string(k), fail);
  }

  // the same forms, numerically, on concrete fixtures
  std::mt19937 rng(42u);

  // exp o (linear functional) on R^2
  {
    ConcreteFunc lin = fixtures::linear_functional("g", {1.0, 1.0});
    ConcreteFunc composed = wrap_scalar_func(
        "explin", ConcreteSpace::euclidean(2), [&lin](const Value& v) {
          return Value::scalar(std::exp(sc(lin({v}))));
        });
    Expr sym = nth_chain_diff(parse("(exp o g)(x)"), x, {1});
    for (int i = 0; i < 20; ++i) {
      EvalContext ctx;
      ctx.bindings.insert({"g", lin});
      Value pt = Value::vector(rand_vec(rng, 2));
      Value eta = Value::vector(rand_vec(rng, 2));
      ctx.point_values["x"] = pt;
      ctx.direction_values[1] = eta;
      ConvergenceReport r =
          chain_diff_numeric(composed, pt, eta, default_schemes(eta));
      expect(r.converged, "exp case did not converge", fail);
      expect(rel_ok(sc(eval(sym, ctx)), sc(r.estimate), kTolClosedForm),
             "exp closed form numeric sample " + std::to_string(i), fail);
    }
  }

  // pow[3] o (cubic polynomial) on R
  {
    ConcreteFunc p = fixtures::polynomial("g", {0.4, -1.0, 0.3, 0.6});
    ConcreteFunc composed = wrap_scalar_func(
        "polycube", ConcreteSpace::euclidean(1), [&p](const Value& v) {
          double t = sc(p({v}));
          return Value::scalar(t * t * t);
        });
    Expr sym = nth_chain_diff(parse("(pow[3] o g)(x)"), x, {1});
    for (int i = 0; i < 20; ++i) {
      EvalContext ctx;
      ctx.bindings.insert({"g", p});
      Value pt = Value::scalar(rand_vec(rng, 1)[0]);
      Value eta = Value::scalar(rand_vec(rng, 1)[0]);
      ctx.point_values["x"] = pt;
      ctx.direction_values[1] = eta;
      ConvergenceReport r =
          chain_diff_numeric(composed, pt, eta, default_schemes(eta));
      expect(r.converged, "pow case did not converge", fail);
      expect(rel_ok(sc(eval(sym, ctx)), sc(r.estimate), kTolClosedForm),
             "pow closed form numeric sample " + std::to_string(i), fail);
    }
  }

  // lin[l] o (linear map) on R^2
  {
    ConcreteFunc B = fixtures::linear_map("g", {{1, 2}, {0, 1}});
    ConcreteFunc l = fixtures::linear_functional("l", {2, -1});
    ConcreteFunc composed = wrap_scalar_func(
        "linlin", ConcreteSpace::euclidean(2), [&B, &l](const Value& v) {
          return l({B({v})});
        });
    Expr sym = nth_chain_diff(parse("(lin[l] o g)(x)"), x, {1});
    for (int i = 0; i < 20; ++i) {
      EvalContext ctx;
      ctx.bindings.insert({"g", B});
      ctx.bindings.insert({"l", l});
      Value pt = Value::vector(rand_vec(rng, 2));
      Value eta = Value::vector(rand_vec(rng, 2));
      ctx.point_values["x"] = pt;
      ctx.direction_values[1] = eta;
      ConvergenceReport r =
          chain_diff_numeric(composed, pt, eta, default_schemes(eta));
      expect(r.converged, "linear case did not converge", fail);
      expect(rel_ok(sc(eval(sym, ctx)), sc(r.estimate), kTolClosedForm),
             "linear closed form numeric sample " + std::to_string(i), fail);
    }
  }
}

// ---------------------------------------------------------------- criterion 5

void criterion5(std::string& fail) {
  std::mt19937 rng(7u);
  Expr x = Expr::point_var("x");
  Expr sym = nth_chain_diff(parse("f(g(x))"), x, {1});

  struct Pair {
    const char* label;
    ConcreteFunc f;
    ConcreteFunc g;
    int dim;
  };
  std::vector<Pair> pairs;
  pairs.push_back({"exp-linear after matrix",
                   fixtures::exp_linear("f", {0.5, -0.25}),
                   fixtures::linear_map("g", {{1, 1}, {0, 2}}), 2});
  pairs.push_back({"quadratic after matrix",
                   fixtures::quadratic_form("f", {{2, 0}, {0, 1}}),
                   fixtures::linear_map("g", {{1, -1}, {1, 1}}), 2});
  pairs.push_back({"polynomial after polynomial",
                   fixtures::polynomial("f", {0.2, 1.0, -0.4}),
                   fixtures::polynomial("g", {0.0, 0.7, 0.0, 0.3}), 1});

  for (const Pair& pr : pairs) {
    ConcreteFunc composed = wrap_scalar_func(
        pr.label,
        pr.g.domain[0],
        [f = pr.f, g = pr.g](const Value& v) { return f({g({v})}); });
    for (int i = 0; i < 20; ++i) {
      EvalContext ctx;
      ctx.bindings.insert({"f", pr.f});
      ctx.bindings.insert({"g", pr.g});
      Value pt = pr.dim == 1 ? Value::scalar(rand_vec(rng, 1)[0])
                             : Value::vector(rand_vec(rng, pr.dim));
      Value eta = pr.dim == 1 ? Value::scalar(rand_vec(rng, 1)[0])
                              : Value::vector(rand_vec(rng, pr.dim));
      ctx.point_values["x"] = pt;
      ctx.direction_values[1] = eta;
      ConvergenceReport r =
          chain_diff_numeric(composed, pt, eta, default_schemes(eta));
      expect(r.converged,
             std::string(pr.label) + " did not converge", fail);
      expect(rel_ok(sc(eval(sym, ctx)), sc(r.estimate), kTolFirstOrder),
             std::string(pr.label) + " sample " + std::to_string(i), fail);
    }
  }

  // total differential on the bivariate fixtures
  struct Biv {
    const char* label;
    ConcreteFunc F;
  };
  std::vector<Biv> bivs = {{"product of slots", fixtures::product_xy("F")},
                           {"square times slot plus exp", fixtures::bivariate_mix("F")}};
  Expr F2 = Expr::func_symbol("F", 2);
  Expr y = Expr::point_var("y");
  Expr total = total_diff(F2, {x, y}, {1, 2});
  for (const Biv& b : bivs) {
    ConcreteFunc joint = wrap_scalar_func(
        b.label, ConcreteSpace::euclidean(2), [F = b.F](const Value& v) {
          return F({Value::scalar(v.vec()[0]), Value::scalar(v.vec()[1])});
        });
    for (int i = 0; i < 20; ++i) {
      std::vector<double> p = rand_vec(rng, 2);
      std::vector<double> d = rand_vec(rng, 2);
      EvalContext ctx;
      ctx.bindings.insert({"F", b.F});
      ctx.point_values["x"] = Value::scalar(p[0]);
      ctx.point_values["y"] = Value::scalar(p[1]);
      ctx.direction_values[1] = Value::scalar(d[0]);
      ctx.direction_values[2] = Value::scalar(d[1]);
      Value pt = Value::vector(p);
      Value eta = Value::vector(d);
      ConvergenceReport r =
          chain_diff_numeric(joint, pt, eta, default_schemes(eta));
      expect(r.converged, std::string(b.label) + " did not converge", fail);
      expect(rel_ok(sc(eval(total, ctx)), sc(r.estimate), kTolFirstOrder),
             std::string(b.label) + " total sample " + std::to_string(i),
             fail);
    }
  }
}

// ---------------------------------------------------------------- criterion 6

void criterion6(std::string& fail) {
  std::mt19937 rng(11u);
  Expr x = Expr::point_var("x");

  struct Case {
    const char* label;
    std::string expr_text;
    std::map<std::string, ConcreteFunc> bindings;
    ConcreteFunc direct;
    int dim;
    bool grid;
  };
  std::vector<Case> cases;

  {
    ConcreteFunc lin = fixtures::linear_functional("g", {0.8, -0.6});
    cases.push_back({"exp after linear in the plane", "(exp o g)(x)",
                     {{"g", lin}},
                     wrap_scalar_func("c", ConcreteSpace::euclidean(2),
                                      [lin](const Value& v) {
                                        return Value::scalar(
                                            std::exp(sc(lin({v}))));
                                      }),
                     2, false});
  }
  {
    ConcreteFunc q = fixtures::quadratic_form("g", {{0.5, 0.2}, {0.2, 0.3}});
    cases.push_back({"exp after quadratic in the plane", "(exp o g)(x)",
                     {{"g", q}},
                     wrap_scalar_func("c", ConcreteSpace::euclidean(2),
                                      [q](const Value& v) {
                                        return Value::scalar(
                                            std::exp(sc(q({v}))));
                                      }),
                     2, false});
  }
  {
    ConcreteFunc p = fixtures::polynomial("p", {0.3, 1.0, -0.5});
    ConcreteFunc r = fixtures::polynomial("r", {-0.2, 0.4, 0.0, 0.25});
    cases.push_back({"product of polynomials on the line", "p(x) * r(x)",
                     {{"p", p}, {"r", r}},
                     wrap_scalar_func("c", ConcreteSpace::euclidean(1),
                                      [p, r](const Value& v) {
                                        return Value::scalar(sc(p({v})) *
                                                             sc(r({v})));
                                      }),
                     1, false});
  }
  {
    std::vector<double> w(16);
    for (int i = 0; i < 16; ++i) w[i] = 1.0 / (4.0 + i);
    ConcreteFunc integ = fixtures::grid_integration("g", w);
    cases.push_back({"exp after integration on a 16-point grid",
                     "(exp o g)(x)",
                     {{"g", integ}},
                     wrap_scalar_func("c", ConcreteSpace::grid(16),
                                      [integ](const Value& v) {
                                        return Value::scalar(
                                            std::exp(sc(integ({v}))));
                                      }),
                     16, true});
  }

  for (const Case& c : cases) {
    for (int n = 2; n <= 3; ++n) {
      std::vector<int> idx;
      for (int i = 1; i <= n; ++i) idx.push_back(i);
      Expr sym = nth_chain_diff(parse(c.expr_text), x, idx);
      double tol = n == 2 ? kTolSecond : kTolThird;
      for (int s = 0; s < 6; ++s) {
        EvalContext ctx;
        ctx.bindings = c.bindings;
        Value pt = c.dim == 1 ? Value::scalar(rand_vec(rng, 1)[0])
                              : Value::vector(rand_vec(rng, c.dim));
        ctx.point_values["x"] = pt;
        std::vector<Value> dirs;
        for (int i = 1; i <= n; ++i) {
          Value d = c.dim == 1 ? Value::scalar(rand_vec(rng, 1)[0])
                               : Value::vector(rand_vec(rng, c.dim));
          ctx.direction_values[i] = d;
          dirs.push_back(d);
        }
        double actual = sc(eval(sym, ctx));
        double estimate = sc(nth_diff_numeric(c.direct, pt, dirs));
        expect(rel_ok(actual, estimate, tol),
               std::string(c.label) + " n=" + std::to_string(n) + " sample " +
                   std::to_string(s),
               fail);
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 7

void criterion7(std::string& fail) {
  const std::vector<double> c = {0.3, -0.7, 0.5, 0.2};
  const double t = 0.4;
  ConcreteFunc g = fixtures::polynomial("g", c);
  double u = c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
  double g1 = c[1] + 2 * c[2] * t + 3 * c[3] * t * t;
  double g2 = 2 * c[2] + 6 * c[3] * t;
  double g3 = 6 * c[3];
  // derivatives of exp(g(t)), worked out with schoolbook calculus
  std::vector<double> classical = {
      std::exp(u) * g1,
      std::exp(u) * (g1 * g1 + g2),
      std::exp(u) * (g1 * g1 * g1 + 3 * g1 * g2 + g3),
      std::exp(u) * (g1 * g1 * g1 * g1 + 6 * g1 * g1 * g2 + 3 * g2 * g2 +
                     4 * g1 * g3),
  };

  Expr x = Expr::point_var("x");
  std::vector<int> idx;
  for (int n = 1; n <= 4; ++n) {
    idx.push_back(n);
    Expr expansion = faa_di_bruno(Expr::exp_fn(), Expr::func_symbol("g"), x, idx);
    EvalContext ctx;
    ctx.bindings.insert({"g", g});
    ctx.point_values["x"] = Value::scalar(t);
    for (int i = 1; i <= n; ++i) ctx.direction_values[i] = Value::scalar(1.0);
    double got = sc(eval(expansion, ctx));
    expect(rel_ok(got, classical[n - 1], kTolScalarFaa),
           "n=" + std::to_string(n) + " got " + std::to_string(got) +
               " want " + std::to_string(classical[n - 1]),
           fail);
  }
}

// ---------------------------------------------------------------- criterion 8

void criterion8(std::string& fail) {
  std::mt19937 rng(3u);
  const std::vector<double> alphas = {-2.0, -1.0, 0.5, 3.0};
  std::vector<ConcreteFunc> fixtures_list = {
      fixtures::quadratic_form("q", {{1, 0.5}, {0.5, 2}}),
      fixtures::exp_linear("e", {0.7, 0.4}),
  };
  for (const ConcreteFunc& f : fixtures_list) {
    for (int s = 0; s < 5; ++s) {
      Value pt = Value::vector(rand_vec(rng, 2));
      Value eta = Value::vector(rand_vec(rng, 2));
      ConvergenceReport base =
          chain_diff_numeric(f, pt, eta, default_schemes(eta));
      expect(base.converged, f.name + " base did not converge", fail);
      for (double a : alphas) {
        Value scaled = eta.scaled(a);
        ConvergenceReport r =
            chain_diff_numeric(f, pt, scaled, default_schemes(scaled));
        expect(r.converged, f.name + " scaled did not converge", fail);
        expect(rel_ok(sc(r.estimate), a * sc(base.estimate), kTolHomogeneity),
               f.name + " homogeneity alpha=" + std::to_string(a), fail);
      }
    }
  }

  ConcreteFunc av = fixtures::abs_value("a");
  Value one = Value::scalar(1.0);
  ConvergenceReport r =
      chain_diff_numeric(av, Value::scalar(0.0), one, default_schemes(one));
  expect(!r.converged,
         "absolute value at zero must fail to converge under alternating steps",
         fail);
}

// ---------------------------------------------------------------- criterion 9

void criterion9(std::string& fail) {
  testgen::ExprGen gen(20260822u);
  for (int i = 0; i < 100; ++i) {
    Expr e = gen.canonical();
    Expr back = parse(to_dsl(e));
    expect(identical(e, back), "round trip broke on " + to_dsl(e), fail);
  }

  std::vector<std::vector<std::string>> invocations = {
      {"diff", "--dirs", "1,2", "exp o g"},
      {"canon", "D[e1] (f o g) @ x + 1/2 * h(x)"},
      {"partitions", "5"},
      {"verify", "(exp o lin[a])(x)", "--point", "0,0", "--a", "1,1",
       "--dirs", "(1,0)", "--tol", "1e-5"},
  };
  for (const auto& args : invocations) {
    std::ostringstream out1, err1, out2, err2;
    int c1 = cli::run_cli(args, out1, err1);
    int c2 = cli::run_cli(args, out2, err2);
    expect(c1 == c2 && out1.str() == out2.str() && err1.str() == err2.str(),
           "repeated run diverged for subcommand " + args[0], fail);
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "partition expansion term counts and partition enumeration", 1.0,
       criterion1},
      {2, "subset expansion term counts", 1.0, criterion2},
      {3, "recursive definition equals both direct expansions", 5.0,
       criterion3},
      {4, "closed-form rules, structural and numeric", 10.0, criterion4},
      {5, "first-order chain rule and total differential residuals", 10.0,
       criterion5},
      {6, "higher-order expansions against nested differences", 30.0,
       criterion6},
      {7, "scalar partition expansion equals classical derivatives", 0.0,
       criterion7},
      {8, "direction homogeneity and the non-differentiable negative", 0.0,
       criterion8},
      {9, "round-trip and byte-identical command output", 0.0, criterion9},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string fail;
    try {
      c.body(fail);
    } catch (const std::exception& e) {
      fail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (fail.empty() && c.time_limit_s > 0 && secs > c.time_limit_s) {
      fail = "exceeded " + std::to_string(c.time_limit_s) + "s budget";
    }
    if (fail.empty()) {
      std::printf("PASS  %d  %s  (%.2fs)\n", c.id, c.label, secs);
    } else {
      std::printf("FAIL  %d  %s  (%.2fs): %s\n", c.id, c.label, secs,
                  fail.c_str());
      ++failed;
    }
  }
  if (failed == 0) {
    std::printf("all 9 criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", failed);
  }
  return failed;
}
