#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chaindiff/errors.hpp"
#include "chaindiff/rational.hpp"

namespace chaindiff {

// Node kinds in canonical sort rank order. Sums and products sort their
// children by this rank first, so scalars lead and differential terms trail.
enum class ExprKind {
  Scalar,
  PointVar,
  DirectionVar,
  FuncSymbol,
  Linear,
  Power,
  Exp,
  Tuple,
  Sum,
  Product,
  Compose,
  Apply,
  Diff,
};

const char* kind_name(ExprKind k);

class Expr;

// One differential term: order-many directions applied to `target` at `base`.
// `slots` is empty for a differential in the whole argument; otherwise it is
// parallel to `directions` and names the 1-based argument slot each direction
// perturbs (a partial differential of a multi-argument target).
struct DiffTerm {
  int order = 0;
  std::shared_ptr<const Expr> target;
  std::shared_ptr<const Expr> base;
  std::vector<Expr> directions;
  std::vector<int> slots;
};

struct ExprNode;

class Expr {
 public:
  Expr();  // Scalar 0

  static Expr scalar(std::int64_t v);
  static Expr scalar(const Rational& v);
  static Expr scalar(double v);
  static Expr point_var(std::string name);
  static Expr direction_var(int index);
  static Expr func_symbol(std::string name, int arity = 1);
  static Expr linear(std::string name);
  static Expr power(int exponent);
  static Expr exp_fn();
  static Expr tuple(std::vector<Expr> elements);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr compose(Expr outer, Expr inner);
  static Expr apply(Expr fn, std::vector<Expr> args);
  static Expr diff(Expr target, Expr base, std::vector<Expr> directions,
                   std::vector<int> slots = {});

  ExprKind kind() const;
  const Rational& scalar_value() const;
  const std::string& name() const;  // PointVar, FuncSymbol, Linear
  int index() const;                // DirectionVar index, Power exponent
  int arity() const;                // FuncSymbol
  const std::vector<Expr>& children() const;
  const DiffTerm& diff_term() const;

  bool is_scalar(double v) const;
  bool is_zero() const;
  bool is_one() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node);
  static Expr from_node(ExprNode n);
  std::shared_ptr<const ExprNode> node_;
  friend const ExprNode& node_of(const Expr&);
};

struct ExprNode {
  ExprKind kind;
  Rational scalar;            // Scalar
  std::string name;           // PointVar, FuncSymbol, Linear
  int index = 0;              // DirectionVar index, Power exponent, FuncSymbol arity
  std::vector<Expr> children; // Tuple/Sum/Product elements, Compose {outer, inner}, Apply {fn, args...}
  std::optional<DiffTerm> diff;
};

// Total structural order; 0 iff identical trees.
int compare(const Expr& a, const Expr& b);
bool identical(const Expr& a, const Expr& b);

Expr canonicalize(const Expr& e);

// Equality after canonicalizing both sides.
bool structural_equal(const Expr& a, const Expr& b);

// Names of every PointVar, FuncSymbol and Linear symbol in the tree.
std::set<std::string> free_symbols(const Expr& e);

// Function-valued vs point-valued classification. Scalars are neutral; sums
// and products mixing the two are Mixed and rejected where it matters.
enum class Role { Function, Point, Neutral, Mixed };
Role role_of(const Expr& e);
bool is_function_expr(const Expr& e);

// Pointwise application of a function-valued expression at `point`.
// Multi-argument symbols take a Tuple point, one component per slot.
Expr apply_at(const Expr& fn, const Expr& point);

}  // namespace chaindiff
