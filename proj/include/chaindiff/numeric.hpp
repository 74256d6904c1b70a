#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaindiff/expr.hpp"
#include "chaindiff/value.hpp"

namespace chaindiff {

struct ConcreteSpace {
  enum class Kind { Euclidean, GridFunctions };
  Kind kind = Kind::Euclidean;
  int dim = 1;  // grid node count for GridFunctions

  static ConcreteSpace euclidean(int d);
  static ConcreteSpace grid(int points);
  bool contains(const Value& v) const;
  std::string str() const;
  friend bool operator==(const ConcreteSpace&, const ConcreteSpace&) = default;
};

struct Codomain {
  bool scalar = true;
  ConcreteSpace space;
  static Codomain real() { return Codomain{}; }
  static Codomain of(ConcreteSpace s) { return Codomain{false, s}; }
  bool contains(const Value& v) const;
  Value zero() const;
};

// A named executable functional. `domain` has one space per argument slot.
// The exact hooks are optional closed forms; anything absent falls back to
// nested central differences when the context allows it.
struct ConcreteFunc {
  std::string name;
  std::vector<ConcreteSpace> domain;
  Codomain codomain;
  std::function<Value(const std::vector<Value>&)> evaluate;
  std::function<Value(const std::vector<Value>&, const Value&)>
      exact_differential;  // (point, direction) -> first-order differential
  std::function<Value(const std::vector<Value>&, const std::vector<Value>&)>
      exact_nth;  // (point, directions) -> higher-order differential
  std::function<Value(const std::vector<Value>&, const std::vector<int>&,
                      const std::vector<Value>&)>
      exact_partial;  // (point, slots, directions) -> partial differential

  int arity() const { return static_cast<int>(domain.size()); }
  Value operator()(const std::vector<Value>& args) const;
};

// One way of driving theta_m -> 0 (and optionally eta_m -> eta) in the
// defining difference quotient.
struct SequenceScheme {
  enum class Theta { Geometric, AlternatingGeometric };
  enum class Extrapolation { None, Richardson };

  std::string name;
  Theta theta_kind = Theta::Geometric;
  double theta0 = 0.1;
  int max_m = 20;
  Extrapolation extrapolation = Extrapolation::Richardson;
  // eta_m = eta + 2^{-m} * perturbation_seed; empty kind() means none
  std::optional<Value> perturbation_seed;

  double theta(int m) const;
  Value eta_at(int m, const Value& eta) const;
  bool has_perturbation() const;
};

// Geometric + alternating + eta-perturbed geometric; the perturbation seed is
// a deterministic pseudorandom vector shaped like `eta`.
std::vector<SequenceScheme> default_schemes(const Value& eta,
                                            unsigned seed = 20260822);

struct NumericOptions {
  double h0 = 1e-3;  // first-order base step for nested differences
};

struct EvalContext {
  std::map<std::string, ConcreteFunc> bindings;
  std::map<std::string, Value> point_values;
  std::map<int, Value> direction_values;
  bool numeric_fallback = true;
  NumericOptions numeric;
};

struct SchemeEstimate {
  std::string scheme;
  Value estimate;
  bool converged = false;
  double tail_disagreement = 0.0;
};

struct ConvergenceReport {
  Value estimate;
  std::vector<SchemeEstimate> per_scheme_estimates;
  double max_scheme_disagreement = 0.0;
  bool converged = false;
  double tolerance_used = 0.0;
};

struct VerificationReport {
  Value actual;    // symbolic side, evaluated
  Value expected;  // numeric difference-quotient side
  double residual = 0.0;
  double tolerance = 0.0;
  bool converged = true;
  bool passed = false;
  std::vector<SchemeEstimate> scheme_details;
};

Value eval(const Expr& e, const EvalContext& ctx);

ConvergenceReport gateaux_numeric(const ConcreteFunc& f, const Value& x,
                                  const Value& eta, const SequenceScheme& scheme,
                                  double tol = 1e-6);

ConvergenceReport chain_diff_numeric(const ConcreteFunc& f, const Value& x,
                                     const Value& eta,
                                     const std::vector<SequenceScheme>& schemes,
                                     double tol = 1e-6);

Value nth_diff_numeric(const ConcreteFunc& f, const Value& x,
                       const std::vector<Value>& directions,
                       const NumericOptions& opts = {});

ConvergenceReport partial_diff_numeric(const ConcreteFunc& f,
                                       const std::vector<Value>& xs, int slot,
                                       const Value& eta,
                                       const std::vector<SequenceScheme>& schemes,
                                       double tol = 1e-6);

// Compares eval(e_symbolic, ctx) against a difference-quotient estimate of
// the order-n differential of `target`, n and the sample taken from ctx
// (directions 1..n and the single bound point variable).
VerificationReport verify(const Expr& e_symbolic, const ConcreteFunc& target,
                          const EvalContext& ctx, double tol);

nlohmann::ordered_json to_json(const ConvergenceReport& r);
nlohmann::ordered_json to_json(const VerificationReport& r);

}  // namespace chaindiff
