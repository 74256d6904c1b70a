#include "chaindiff/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace chaindiff {

ConcreteSpace ConcreteSpace::euclidean(int d) {
  if (d < 1) throw ArgumentError("Euclidean dimension must be >= 1");
  return ConcreteSpace{Kind::Euclidean, d};
}

ConcreteSpace ConcreteSpace::grid(int points) {
  if (points < 2) throw ArgumentError("grid needs at least 2 nodes");
  return ConcreteSpace{Kind::GridFunctions, points};
}

bool ConcreteSpace::contains(const Value& v) const {
  if (kind == Kind::Euclidean && dim == 1) return v.is_scalar();
  return v.kind() == Value::Kind::Vector &&
         static_cast<int>(v.vec().size()) == dim;
}

std::string ConcreteSpace::str() const {
  if (kind == Kind::Euclidean) return "R^" + std::to_string(dim);
  return "grid[" + std::to_string(dim) + "]";
}

bool Codomain::contains(const Value& v) const {
  if (scalar) return v.is_scalar();
  return space.contains(v);
}

Value Codomain::zero() const {
  if (scalar) return Value::scalar(0.0);
  if (space.kind == ConcreteSpace::Kind::Euclidean && space.dim == 1)
    return Value::scalar(0.0);
  return Value::vector(std::vector<double>(space.dim, 0.0));
}

Value ConcreteFunc::operator()(const std::vector<Value>& args) const {
  if (static_cast<int>(args.size()) != arity())
    throw EvalError(name + " takes " + std::to_string(arity()) +
                    " arguments, got " + std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i)
    if (!domain[i].contains(args[i]))
      throw EvalError("argument " + std::to_string(i + 1) + " of " + name +
                      " is not in " + domain[i].str());
  Value out = evaluate(args);
  if (!codomain.contains(out))
    throw EvalError(name + " produced a value outside its codomain");
  return out;
}

double SequenceScheme::theta(int m) const {
  double t = theta0 * std::pow(0.5, m);
  if (theta_kind == Theta::AlternatingGeometric && (m % 2) == 1) t = -t;
  return t;
}

bool SequenceScheme::has_perturbation() const {
  return perturbation_seed.has_value();
}

Value SequenceScheme::eta_at(int m, const Value& eta) const {
  if (!perturbation_seed) return eta;
  return eta + perturbation_seed->scaled(std::pow(0.5, m));
}

namespace {

Value random_like(const Value& shape, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (shape.kind()) {
    case Value::Kind::Scalar:
      return Value::scalar(u(rng));
    case Value::Kind::Vector: {
      std::vector<double> v(shape.vec().size());
      for (double& x : v) x = u(rng);
      return Value::vector(std::move(v));
    }
    case Value::Kind::Tuple: {
      std::vector<Value> items;
      items.reserve(shape.items().size());
      for (const Value& it : shape.items()) items.push_back(random_like(it, rng));
      return Value::tuple(std::move(items));
    }
  }
  throw EvalError("bad value kind");
}

}  // namespace

std::vector<SequenceScheme> default_schemes(const Value& eta, unsigned seed) {
  std::mt19937 rng(seed);
  Value u = random_like(eta, rng);
  double n = u.norm();
  if (n > 0) u = u.scaled(1.0 / n);
  SequenceScheme geometric;
  geometric.name = "geometric";
  SequenceScheme alternating;
  alternating.name = "alternating";
  alternating.theta_kind = SequenceScheme::Theta::AlternatingGeometric;
  SequenceScheme perturbed;
  perturbed.name = "eta-perturbed";
  perturbed.perturbation_seed = u;
  return {geometric, alternating, perturbed};
}

namespace {

using Func1 = std::function<Value(const Value&)>;

// Joint view: arity-1 functions take the value itself, multi-argument
// functions take a tuple with one component per slot.
Func1 joint_view(const ConcreteFunc& f) {
  if (f.arity() == 1) return [&f](const Value& x) { return f({x}); };
  return [&f](const Value& x) { return f(x.items()); };
}

struct SchemeRun {
  SchemeEstimate summary;
  bool finite = true;
};

SchemeRun run_scheme(const Func1& f, const Value& x, const Value& eta,
                     const SequenceScheme& scheme, bool allow_perturbation,
                     double tol) {
  Value f0 = f(x);
  std::vector<double> thetas;
  std::vector<Value> quotients;
  for (int m = 0; m <= scheme.max_m; ++m) {
    double th = scheme.theta(m);
    if (th == 0.0) throw ArgumentError("scheme step vanished before max_m");
    Value em = allow_perturbation ? scheme.eta_at(m, eta) : eta;
    Value q = (f(x + em.scaled(th)) - f0).scaled(1.0 / th);
    thetas.push_back(th);
    quotients.push_back(std::move(q));
  }
  std::vector<Value> estimates;
  if (scheme.extrapolation == SequenceScheme::Extrapolation::Richardson &&
      quotients.size() >= 2) {
    for (size_t m = 0; m + 1 < quotients.size(); ++m) {
      double a = thetas[m];
      double b = thetas[m + 1];
      // linear-model extrapolation of q(theta) to theta = 0
      estimates.push_back(quotients[m + 1].scaled(a / (a - b)) +
                          quotients[m].scaled(-b / (a - b)));
    }
  } else {
    estimates = quotients;
  }
  SchemeRun run;
  run.summary.scheme = scheme.name;
  run.summary.estimate = estimates.back();
  double tail = 0.0;
  size_t first = estimates.size() >= 3 ? estimates.size() - 3 : 0;
  for (size_t i = first; i < estimates.size(); ++i) {
    if (!std::isfinite(estimates[i].norm())) run.finite = false;
    for (size_t j = i + 1; j < estimates.size(); ++j)
      tail = std::max(tail, rel_dist(estimates[i], estimates[j]));
  }
  if (!run.finite) tail = std::numeric_limits<double>::infinity();
  run.summary.tail_disagreement = tail;
  run.summary.converged = run.finite && tail <= tol;
  return run;
}

ConvergenceReport assemble(std::vector<SchemeRun> runs, double tol) {
  ConvergenceReport rep;
  rep.tolerance_used = tol;
  double worst = 0.0;
  for (const SchemeRun& r : runs)
    worst = std::max(worst, r.summary.tail_disagreement);
  for (size_t i = 0; i < runs.size(); ++i)
    for (size_t j = i + 1; j < runs.size(); ++j)
      worst = std::max(worst, rel_dist(runs[i].summary.estimate,
                                       runs[j].summary.estimate));
  rep.max_scheme_disagreement = worst;
  rep.converged = worst <= tol;
  rep.estimate = runs.front().summary.estimate;
  for (SchemeRun& r : runs) rep.per_scheme_estimates.push_back(std::move(r.summary));
  return rep;
}

}  // namespace

ConvergenceReport gateaux_numeric(const ConcreteFunc& f, const Value& x,
                                  const Value& eta,
                                  const SequenceScheme& scheme, double tol) {
  Func1 fj = joint_view(f);
  // Definition-1 limit: theta varies, eta stays fixed.
  std::vector<SchemeRun> runs = {run_scheme(fj, x, eta, scheme, false, tol)};
  return assemble(std::move(runs), tol);
}

ConvergenceReport chain_diff_numeric(const ConcreteFunc& f, const Value& x,
                                     const Value& eta,
                                     const std::vector<SequenceScheme>& schemes,
                                     double tol) {
  if (schemes.size() < 2)
    throw ArgumentError("need at least two sequence schemes");
  bool any_perturbed = false;
  bool any_alternating = false;
  for (const SequenceScheme& s : schemes) {
    if (s.has_perturbation() && s.perturbation_seed->norm() > 0)
      any_perturbed = true;
    if (s.theta_kind == SequenceScheme::Theta::AlternatingGeometric)
      any_alternating = true;
  }
  if (!any_perturbed)
    throw ArgumentError("need a scheme with a nonzero eta perturbation");
  if (!any_alternating)
    throw ArgumentError("need a scheme with alternating-sign theta");
  Func1 fj = joint_view(f);
  std::vector<SchemeRun> runs;
  runs.reserve(schemes.size());
  for (const SequenceScheme& s : schemes)
    runs.push_back(run_scheme(fj, x, eta, s, true, tol));
  return assemble(std::move(runs), tol);
}

namespace {

Value nested_diff(const Func1& f, const Value& x,
                  const std::vector<Value>& dirs, size_t k, double h) {
  if (k == 0) return f(x);
  const Value& d = dirs[k - 1];
  auto central = [&](double hh) {
    Value hi = nested_diff(f, x + d.scaled(hh), dirs, k - 1, h);
    Value lo = nested_diff(f, x - d.scaled(hh), dirs, k - 1, h);
    return (hi - lo).scaled(1.0 / (2.0 * hh));
  };
  Value coarse = central(h);
  Value fine = central(h / 2.0);
  return (fine.scaled(4.0) - coarse).scaled(1.0 / 3.0);
}

double level_step(const NumericOptions& opts, size_t n) {
  return n <= 1 ? opts.h0 : std::pow(opts.h0, 1.0 / static_cast<double>(n));
}

}  // namespace

Value nth_diff_numeric(const ConcreteFunc& f, const Value& x,
                       const std::vector<Value>& directions,
                       const NumericOptions& opts) {
  size_t n = directions.size();
  if (n > 4)
    throw ArgumentError("unsupported order " + std::to_string(n) +
                        " for nested differences (max 4)");
  Func1 fj = joint_view(f);
  if (n == 0) return fj(x);
  return nested_diff(fj, x, directions, n, level_step(opts, n));
}

ConvergenceReport partial_diff_numeric(const ConcreteFunc& f,
                                       const std::vector<Value>& xs, int slot,
                                       const Value& eta,
                                       const std::vector<SequenceScheme>& schemes,
                                       double tol) {
  if (slot < 1 || slot > f.arity())
    throw ArgumentError("slot " + std::to_string(slot) + " out of range for " +
                        f.name);
  if (static_cast<int>(xs.size()) != f.arity())
    throw ArgumentError("point tuple size does not match arity of " + f.name);
  ConcreteFunc section;
  section.name = f.name + "[slot " + std::to_string(slot) + "]";
  section.domain = {f.domain[slot - 1]};
  section.codomain = f.codomain;
  section.evaluate = [&f, xs, slot](const std::vector<Value>& args) {
    std::vector<Value> full = xs;
    full[slot - 1] = args[0];
    return f(full);
  };
  return chain_diff_numeric(section, xs[slot - 1], eta, schemes, tol);
}

namespace {

std::int64_t falling_factorial(int k, int m) {
  std::int64_t acc = 1;
  for (int i = 0; i < m; ++i) acc *= (k - i);
  return acc;
}

Value eval_diff_term(const Expr& e, const EvalContext& ctx);

Value eval_node(const Expr& e, const EvalContext& ctx) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return Value::scalar(e.scalar_value().value());
    case ExprKind::PointVar: {
      auto it = ctx.point_values.find(e.name());
      if (it == ctx.point_values.end())
        throw EvalError("unbound point variable " + e.name());
      return it->second;
    }
    case ExprKind::DirectionVar: {
      auto it = ctx.direction_values.find(e.index());
      if (it == ctx.direction_values.end())
        throw EvalError("unbound direction e" + std::to_string(e.index()));
      return it->second;
    }
    case ExprKind::Tuple: {
      std::vector<Value> items;
      items.reserve(e.children().size());
      for (const Expr& c : e.children()) items.push_back(eval_node(c, ctx));
      return Value::tuple(std::move(items));
    }
    case ExprKind::Sum: {
      Value acc = eval_node(e.children()[0], ctx);
      for (size_t i = 1; i < e.children().size(); ++i) {
        Value term = eval_node(e.children()[i], ctx);
        // scalar zero absorbs into any shape
        if (term.is_scalar() && term.scalar_value() == 0.0) continue;
        if (acc.is_scalar() && acc.scalar_value() == 0.0) {
          acc = std::move(term);
          continue;
        }
        acc = acc + term;
      }
      return acc;
    }
    case ExprKind::Product: {
      Value acc = eval_node(e.children()[0], ctx);
      for (size_t i = 1; i < e.children().size(); ++i)
        acc = acc * eval_node(e.children()[i], ctx);
      return acc;
    }
    case ExprKind::Apply: {
      const Expr& fn = e.children()[0];
      std::vector<Value> args;
      for (size_t i = 1; i < e.children().size(); ++i)
        args.push_back(eval_node(e.children()[i], ctx));
      switch (fn.kind()) {
        case ExprKind::Exp:
          return exp_value(args[0]);
        case ExprKind::Power:
          return pow_value(args[0], fn.index());
        case ExprKind::Linear:
        case ExprKind::FuncSymbol: {
          auto it = ctx.bindings.find(fn.name());
          if (it == ctx.bindings.end())
            throw EvalError("unbound symbol " + fn.name());
          return it->second(args);
        }
        default:
          throw EvalError(std::string("cannot evaluate application of ") +
                          kind_name(fn.kind()));
      }
    }
    case ExprKind::Diff:
      return eval_diff_term(e, ctx);
    default:
      throw EvalError(std::string("cannot evaluate ") + kind_name(e.kind()) +
                      "; function values must be applied to a point");
  }
}

Value eval_diff_term(const Expr& e, const EvalContext& ctx) {
  const DiffTerm& dt = e.diff_term();
  std::vector<Value> args;
  if (dt.base->kind() == ExprKind::Tuple) {
    for (const Expr& c : dt.base->children()) args.push_back(eval_node(c, ctx));
  } else {
    args.push_back(eval_node(*dt.base, ctx));
  }
  std::vector<Value> dirs;
  dirs.reserve(dt.directions.size());
  for (const Expr& d : dt.directions) dirs.push_back(eval_node(d, ctx));
  const int m = dt.order;

  switch (dt.target->kind()) {
    case ExprKind::Exp: {
      Value out = exp_value(args[0]);
      for (const Value& d : dirs) out = out * d;
      return out;
    }
    case ExprKind::Power: {
      int k = dt.target->index();
      if (m > k) return Value::scalar(0.0);
      Value out = pow_value(args[0], k - m)
                      .scaled(static_cast<double>(falling_factorial(k, m)));
      for (const Value& d : dirs) out = out * d;
      return out;
    }
    case ExprKind::Linear: {
      auto it = ctx.bindings.find(dt.target->name());
      if (it == ctx.bindings.end())
        throw EvalError("unbound symbol " + dt.target->name());
      if (m == 1) return it->second({dirs[0]});
      return it->second.codomain.zero();
    }
    case ExprKind::FuncSymbol: {
      auto it = ctx.bindings.find(dt.target->name());
      if (it == ctx.bindings.end())
        throw EvalError("unbound symbol " + dt.target->name());
      const ConcreteFunc& f = it->second;
      if (dt.slots.empty()) {
        if (m == 1 && f.exact_differential)
          return f.exact_differential(args, dirs[0]);
        if (f.exact_nth) return f.exact_nth(args, dirs);
        if (!ctx.numeric_fallback)
          throw EvalError(f.name +
                          " has no exact differential and numeric estimation "
                          "is disabled");
        Value x = f.arity() == 1 ? args[0] : Value::tuple(args);
        return nth_diff_numeric(f, x, dirs, ctx.numeric);
      }
      if (f.exact_partial) return f.exact_partial(args, dt.slots, dirs);
      if (!ctx.numeric_fallback)
        throw EvalError(f.name +
                        " has no exact partial differential and numeric "
                        "estimation is disabled");
      // nested central differences perturbing one argument slot per level
      std::function<Value(std::vector<Value>&, size_t, double)> nested =
          [&](std::vector<Value>& at, size_t k, double h) -> Value {
        if (k == 0) return f(at);
        int s = dt.slots[k - 1] - 1;
        const Value& d = dirs[k - 1];
        auto central = [&](double hh) {
          Value saved = at[s];
          at[s] = saved + d.scaled(hh);
          Value hi = nested(at, k - 1, h);
          at[s] = saved - d.scaled(hh);
          Value lo = nested(at, k - 1, h);
          at[s] = saved;
          return (hi - lo).scaled(1.0 / (2.0 * hh));
        };
        Value coarse = central(h);
        Value fine = central(h / 2.0);
        return (fine.scaled(4.0) - coarse).scaled(1.0 / 3.0);
      };
      if (m > 4)
        throw ArgumentError("unsupported order " + std::to_string(m) +
                            " for nested differences (max 4)");
      double h = m <= 1 ? ctx.numeric.h0
                        : std::pow(ctx.numeric.h0, 1.0 / static_cast<double>(m));
      return nested(args, dirs.size(), h);
    }
    default: {
      // composite target: differentiate it numerically as one function
      if (!ctx.numeric_fallback)
        throw EvalError(
            "differential of a composite target needs numeric estimation, "
            "which is disabled");
      if (!dt.slots.empty())
        throw EvalError("partial differential of a composite target");
      Expr target = *dt.target;
      const std::string var = "__base";
      Expr applied = canonicalize(apply_at(target, Expr::point_var(var)));
      EvalContext inner = ctx;
      ConcreteFunc wrapper;
      wrapper.name = "<composite>";
      wrapper.domain = {ConcreteSpace::euclidean(1)};
      wrapper.codomain = Codomain::real();
      wrapper.evaluate = [applied, inner, var](const std::vector<Value>& a) {
        EvalContext c = inner;
        c.point_values[var] = a[0];
        return eval_node(applied, c);
      };
      // bypass operator() space checks: the wrapper's true spaces are unknown
      Func1 raw = [&wrapper](const Value& x) { return wrapper.evaluate({x}); };
      if (m > 4)
        throw ArgumentError("unsupported order " + std::to_string(m) +
                            " for nested differences (max 4)");
      double h = m <= 1 ? ctx.numeric.h0
                        : std::pow(ctx.numeric.h0, 1.0 / static_cast<double>(m));
      return nested_diff(raw, args[0], dirs, dirs.size(), h);
    }
  }
}

}  // namespace

Value eval(const Expr& e, const EvalContext& ctx) { return eval_node(e, ctx); }

VerificationReport verify(const Expr& e_symbolic, const ConcreteFunc& target,
                          const EvalContext& ctx, double tol) {
  if (tol <= 0) throw ArgumentError("tolerance must be positive");
  if (ctx.point_values.size() != 1)
    throw ArgumentError("verification needs exactly one bound point variable");
  const Value& point = ctx.point_values.begin()->second;
  size_t n = ctx.direction_values.size();
  std::vector<Value> dirs;
  int want = 1;
  for (const auto& [idx, v] : ctx.direction_values) {
    if (idx != want)
      throw ArgumentError("verification directions must be indexed 1..n");
    ++want;
    dirs.push_back(v);
  }
  VerificationReport rep;
  rep.tolerance = tol;
  rep.actual = eval(e_symbolic, ctx);
  if (n == 1) {
    ConvergenceReport cr =
        chain_diff_numeric(target, point, dirs[0], default_schemes(dirs[0]), tol);
    rep.expected = cr.estimate;
    rep.converged = cr.converged;
    rep.scheme_details = cr.per_scheme_estimates;
  } else {
    rep.expected = nth_diff_numeric(target, point, dirs, ctx.numeric);
    rep.converged = true;
  }
  rep.residual = (rep.actual - rep.expected).norm();
  rep.passed =
      rep.converged && rep.residual <= tol * (1.0 + rep.expected.norm());
  return rep;
}

namespace {

nlohmann::ordered_json value_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Scalar:
      return v.scalar_value();
    case Value::Kind::Vector:
      return v.vec();
    case Value::Kind::Tuple: {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const Value& it : v.items()) arr.push_back(value_json(it));
      return arr;
    }
  }
  return nullptr;
}

nlohmann::ordered_json scheme_json(const SchemeEstimate& s) {
  nlohmann::ordered_json j;
  j["scheme"] = s.scheme;
  j["estimate"] = value_json(s.estimate);
  j["converged"] = s.converged;
  j["tail_disagreement"] = s.tail_disagreement;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["estimate"] = value_json(r.estimate);
  nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
  for (const SchemeEstimate& s : r.per_scheme_estimates)
    schemes.push_back(scheme_json(s));
  j["per_scheme_estimates"] = std::move(schemes);
  j["max_scheme_disagreement"] = r.max_scheme_disagreement;
  j["converged"] = r.converged;
  j["tolerance_used"] = r.tolerance_used;
  return j;
}

nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["actual"] = value_json(r.actual);
  j["expected"] = value_json(r.expected);
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["converged"] = r.converged;
  j["passed"] = r.passed;
  nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
  for (const SchemeEstimate& s : r.scheme_details)
    schemes.push_back(scheme_json(s));
  j["schemes"] = std::move(schemes);
  return j;
}

}  // namespace chaindiff
