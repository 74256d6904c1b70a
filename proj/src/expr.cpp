#include "chaindiff/expr.hpp"

#include <algorithm>
#include <utility>

namespace chaindiff {

const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::Scalar: return "Scalar";
    case ExprKind::PointVar: return "PointVar";
    case ExprKind::DirectionVar: return "DirectionVar";
    case ExprKind::FuncSymbol: return "FuncSymbol";
    case ExprKind::Linear: return "Linear";
    case ExprKind::Power: return "Power";
    case ExprKind::Exp: return "Exp";
    case ExprKind::Tuple: return "Tuple";
    case ExprKind::Sum: return "Sum";
    case ExprKind::Product: return "Product";
    case ExprKind::Compose: return "Compose";
    case ExprKind::Apply: return "Apply";
    case ExprKind::Diff: return "Diff";
  }
  return "?";
}

const ExprNode& node_of(const Expr& e) { return *e.node_; }

Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr Expr::from_node(ExprNode n) {
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr::Expr() {
  ExprNode n;
  n.kind = ExprKind::Scalar;
  n.scalar = Rational::integer(0);
  node_ = std::make_shared<const ExprNode>(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::scalar_value() const { return node_->scalar; }
const std::string& Expr::name() const { return node_->name; }
int Expr::index() const { return node_->index; }
int Expr::arity() const { return node_->index; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
const DiffTerm& Expr::diff_term() const {
  if (!node_->diff) throw StructuralError("not a differential term");
  return *node_->diff;
}

bool Expr::is_scalar(double v) const {
  return node_->kind == ExprKind::Scalar && node_->scalar.value() == v;
}
bool Expr::is_zero() const {
  return node_->kind == ExprKind::Scalar && node_->scalar.is_zero();
}
bool Expr::is_one() const {
  return node_->kind == ExprKind::Scalar && node_->scalar.is_one();
}

Expr Expr::scalar(std::int64_t v) { return scalar(Rational::integer(v)); }

Expr Expr::scalar(const Rational& v) {
  ExprNode n;
  n.kind = ExprKind::Scalar;
  n.scalar = v;
  return from_node(std::move(n));
}

Expr Expr::scalar(double v) { return scalar(Rational::real(v)); }

Expr Expr::point_var(std::string name) {
  if (name.empty()) throw ArgumentError("empty point variable name");
  ExprNode n;
  n.kind = ExprKind::PointVar;
  n.name = std::move(name);
  return from_node(std::move(n));
}

Expr Expr::direction_var(int index) {
  if (index < 1) throw ArgumentError("direction index must be >= 1");
  ExprNode n;
  n.kind = ExprKind::DirectionVar;
  n.index = index;
  return from_node(std::move(n));
}

Expr Expr::func_symbol(std::string name, int arity) {
  if (name.empty()) throw ArgumentError("empty function symbol name");
  if (arity < 1) throw ArgumentError("function arity must be >= 1");
  ExprNode n;
  n.kind = ExprKind::FuncSymbol;
  n.name = std::move(name);
  n.index = arity;
  return from_node(std::move(n));
}

Expr Expr::linear(std::string name) {
  if (name.empty()) throw ArgumentError("empty linear symbol name");
  ExprNode n;
  n.kind = ExprKind::Linear;
  n.name = std::move(name);
  return from_node(std::move(n));
}

Expr Expr::power(int exponent) {
  if (exponent < 0) throw ArgumentError("power exponent must be >= 0");
  ExprNode n;
  n.kind = ExprKind::Power;
  n.index = exponent;
  return from_node(std::move(n));
}

Expr Expr::exp_fn() {
  ExprNode n;
  n.kind = ExprKind::Exp;
  return from_node(std::move(n));
}

Expr Expr::tuple(std::vector<Expr> elements) {
  if (elements.empty()) throw ArgumentError("empty tuple");
  ExprNode n;
  n.kind = ExprKind::Tuple;
  n.children = std::move(elements);
  return from_node(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  ExprNode n;
  n.kind = ExprKind::Sum;
  n.children = std::move(terms);
  return from_node(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  ExprNode n;
  n.kind = ExprKind::Product;
  n.children = std::move(factors);
  return from_node(std::move(n));
}

Expr Expr::compose(Expr outer, Expr inner) {
  ExprNode n;
  n.kind = ExprKind::Compose;
  n.children = {std::move(outer), std::move(inner)};
  return from_node(std::move(n));
}

Expr Expr::apply(Expr fn, std::vector<Expr> args) {
  if (args.empty()) throw ArgumentError("application with no arguments");
  ExprNode n;
  n.kind = ExprKind::Apply;
  n.children.reserve(args.size() + 1);
  n.children.push_back(std::move(fn));
  for (auto& a : args) n.children.push_back(std::move(a));
  return from_node(std::move(n));
}

Expr Expr::diff(Expr target, Expr base, std::vector<Expr> directions,
                std::vector<int> slots) {
  if (!slots.empty() && slots.size() != directions.size())
    throw StructuralError("slot list does not match direction list");
  for (int s : slots)
    if (s < 1) throw StructuralError("argument slots are 1-based");
  DiffTerm dt;
  dt.order = static_cast<int>(directions.size());
  dt.target = std::make_shared<const Expr>(std::move(target));
  dt.base = std::make_shared<const Expr>(std::move(base));
  dt.directions = std::move(directions);
  dt.slots = std::move(slots);
  ExprNode n;
  n.kind = ExprKind::Diff;
  n.diff = std::move(dt);
  return from_node(std::move(n));
}

namespace {

int compare_vec(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  size_t m = std::min(a.size(), b.size());
  for (size_t i = 0; i < m; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  const ExprNode& x = node_of(a);
  const ExprNode& y = node_of(b);
  if (x.kind != y.kind)
    return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
  switch (x.kind) {
    case ExprKind::Scalar:
      return compare(x.scalar, y.scalar);
    case ExprKind::PointVar:
    case ExprKind::Linear:
      return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    case ExprKind::FuncSymbol: {
      int c = x.name.compare(y.name);
      if (c != 0) return c < 0 ? -1 : 1;
      if (x.index != y.index) return x.index < y.index ? -1 : 1;
      return 0;
    }
    case ExprKind::DirectionVar:
    case ExprKind::Power:
      return x.index == y.index ? 0 : (x.index < y.index ? -1 : 1);
    case ExprKind::Exp:
      return 0;
    case ExprKind::Tuple:
    case ExprKind::Sum:
    case ExprKind::Product:
    case ExprKind::Compose:
    case ExprKind::Apply:
      return compare_vec(x.children, y.children);
    case ExprKind::Diff: {
      const DiffTerm& p = *x.diff;
      const DiffTerm& q = *y.diff;
      if (p.order != q.order) return p.order < q.order ? -1 : 1;
      if (p.slots != q.slots) return p.slots < q.slots ? -1 : 1;
      int c = compare(*p.target, *q.target);
      if (c != 0) return c;
      c = compare(*p.base, *q.base);
      if (c != 0) return c;
      return compare_vec(p.directions, q.directions);
    }
  }
  return 0;
}

bool identical(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

Role role_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return Role::Neutral;
    case ExprKind::FuncSymbol:
    case ExprKind::Linear:
    case ExprKind::Power:
    case ExprKind::Exp:
    case ExprKind::Compose:
      return Role::Function;
    case ExprKind::PointVar:
    case ExprKind::DirectionVar:
    case ExprKind::Tuple:
    case ExprKind::Apply:
    case ExprKind::Diff:
      return Role::Point;
    case ExprKind::Sum:
    case ExprKind::Product: {
      Role acc = Role::Neutral;
      for (const Expr& c : e.children()) {
        Role r = role_of(c);
        if (r == Role::Neutral) continue;
        if (r == Role::Mixed) return Role::Mixed;
        if (acc == Role::Neutral) acc = r;
        else if (acc != r) return Role::Mixed;
      }
      return acc;
    }
  }
  return Role::Mixed;
}

bool is_function_expr(const Expr& e) { return role_of(e) == Role::Function; }

Expr apply_at(const Expr& fn, const Expr& point) {
  switch (fn.kind()) {
    case ExprKind::Scalar:
      return fn;
    case ExprKind::FuncSymbol: {
      int n = fn.arity();
      if (n == 1) return Expr::apply(fn, {point});
      if (point.kind() != ExprKind::Tuple ||
          static_cast<int>(point.children().size()) != n)
        throw StructuralError("applying " + fn.name() + " (arity " +
                              std::to_string(n) + ") to a non-matching point");
      return Expr::apply(fn, point.children());
    }
    case ExprKind::Linear:
    case ExprKind::Power:
    case ExprKind::Exp:
      return Expr::apply(fn, {point});
    case ExprKind::Compose:
      return apply_at(fn.children()[0], apply_at(fn.children()[1], point));
    case ExprKind::Sum:
    case ExprKind::Product: {
      std::vector<Expr> parts;
      parts.reserve(fn.children().size());
      for (const Expr& c : fn.children()) parts.push_back(apply_at(c, point));
      return fn.kind() == ExprKind::Sum ? Expr::sum(std::move(parts))
                                        : Expr::product(std::move(parts));
    }
    default:
      throw StructuralError(std::string("cannot apply ") +
                            kind_name(fn.kind()) + " as a function");
  }
}

namespace {

void collect_free(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::PointVar:
    case ExprKind::FuncSymbol:
    case ExprKind::Linear:
      out.insert(e.name());
      break;
    case ExprKind::Diff: {
      const DiffTerm& dt = e.diff_term();
      collect_free(*dt.target, out);
      collect_free(*dt.base, out);
      for (const Expr& d : dt.directions) collect_free(d, out);
      break;
    }
    default:
      for (const Expr& c : e.children()) collect_free(c, out);
  }
}

Expr canon(const Expr& e);

void flatten_into(ExprKind k, const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == k) {
    for (const Expr& c : e.children()) flatten_into(k, c, out);
  } else {
    out.push_back(e);
  }
}

// terms already canonical
Expr make_sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (const Expr& t : terms) flatten_into(ExprKind::Sum, t, flat);
  Rational acc = Rational::integer(0);
  std::vector<Expr> rest;
  for (const Expr& t : flat) {
    if (t.kind() == ExprKind::Scalar) acc = acc + t.scalar_value();
    else rest.push_back(t);
  }
  if (!acc.is_zero() || rest.empty()) rest.push_back(Expr::scalar(acc));
  std::sort(rest.begin(), rest.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (rest.size() == 1) return rest[0];
  return Expr::sum(std::move(rest));
}

Expr make_product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  for (const Expr& f : factors) flatten_into(ExprKind::Product, f, flat);
  Rational acc = Rational::integer(1);
  std::vector<Expr> rest;
  for (const Expr& f : flat) {
    if (f.kind() == ExprKind::Scalar) acc = acc * f.scalar_value();
    else rest.push_back(f);
  }
  if (acc.is_zero()) return Expr::scalar(Rational::integer(0));
  if (!acc.is_one() || rest.empty()) rest.push_back(Expr::scalar(acc));
  std::sort(rest.begin(), rest.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (rest.size() == 1) return rest[0];
  return Expr::product(std::move(rest));
}

// fn and args already canonical
Expr make_apply(const Expr& fn, std::vector<Expr> args) {
  switch (fn.kind()) {
    case ExprKind::Compose: {
      if (args.size() != 1)
        throw StructuralError("composition applied to more than one argument");
      Expr inner_val = make_apply(fn.children()[1], std::move(args));
      return make_apply(fn.children()[0], {std::move(inner_val)});
    }
    case ExprKind::Power: {
      if (args.size() != 1)
        throw StructuralError("power applied to more than one argument");
      int k = fn.index();
      if (k == 0) return Expr::scalar(std::int64_t{1});
      if (k == 1) return args[0];
      if (args[0].kind() == ExprKind::Scalar)
        return Expr::scalar(args[0].scalar_value().pow(k));
      return Expr::apply(fn, std::move(args));
    }
    case ExprKind::Exp:
    case ExprKind::Linear:
      if (args.size() != 1)
        throw StructuralError(std::string(kind_name(fn.kind())) +
                              " applied to more than one argument");
      // l(0) = 0 is part of what Linear means.
      if (fn.kind() == ExprKind::Linear && args[0].is_zero())
        return Expr::scalar(std::int64_t{0});
      return Expr::apply(fn, std::move(args));
    case ExprKind::FuncSymbol:
      if (static_cast<int>(args.size()) != fn.arity())
        throw StructuralError("arity mismatch applying " + fn.name() +
                              ": expected " + std::to_string(fn.arity()) +
                              " arguments, got " + std::to_string(args.size()));
      return Expr::apply(fn, std::move(args));
    case ExprKind::Sum:
    case ExprKind::Product: {
      std::vector<Expr> parts;
      parts.reserve(fn.children().size());
      for (const Expr& c : fn.children()) parts.push_back(make_apply(c, args));
      return fn.kind() == ExprKind::Sum ? make_sum(std::move(parts))
                                        : make_product(std::move(parts));
    }
    case ExprKind::Scalar:
      return fn;
    default:
      throw StructuralError(std::string("cannot apply ") +
                            kind_name(fn.kind()) + " as a function");
  }
}

Expr make_compose(const Expr& outer, const Expr& inner) {
  std::vector<Expr> chain;
  flatten_into(ExprKind::Compose, outer, chain);
  flatten_into(ExprKind::Compose, inner, chain);
  std::vector<Expr> kept;
  for (const Expr& c : chain) {
    if (c.kind() == ExprKind::Power && c.index() == 1) continue;  // identity
    Role r = role_of(c);
    if (r != Role::Function)
      throw StructuralError("composition operand is not a function");
    kept.push_back(c);
  }
  if (kept.empty()) return Expr::power(1);
  Expr acc = kept.back();
  for (auto it = kept.rbegin() + 1; it != kept.rend(); ++it)
    acc = Expr::compose(*it, acc);
  return acc;
}

Expr make_diff(DiffTerm dt) {
  if (dt.directions.empty())
    return canon(apply_at(*dt.target, *dt.base));
  if (role_of(*dt.target) != Role::Function)
    throw StructuralError("differential target is not a function");
  for (const Expr& d : dt.directions)
    if (d.is_zero()) return Expr::scalar(std::int64_t{0});
  if (dt.target->kind() == ExprKind::FuncSymbol) {
    int n = dt.target->arity();
    for (int s : dt.slots)
      if (s > n)
        throw StructuralError("slot exceeds arity of " + dt.target->name());
    if (n >= 2 &&
        (dt.base->kind() != ExprKind::Tuple ||
         static_cast<int>(dt.base->children().size()) != n))
      throw StructuralError("base of a differential of " + dt.target->name() +
                            " must be a tuple of arity " + std::to_string(n));
    if (n == 1) dt.slots.clear();
  }
  std::set<int> seen;
  for (const Expr& d : dt.directions) {
    if (d.kind() == ExprKind::DirectionVar && !seen.insert(d.index()).second)
      throw StructuralError("repeated direction variable in differential");
  }
  if (dt.slots.empty()) {
    std::sort(dt.directions.begin(), dt.directions.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  } else {
    std::vector<std::pair<int, Expr>> pairs;
    pairs.reserve(dt.directions.size());
    for (size_t i = 0; i < dt.directions.size(); ++i)
      pairs.emplace_back(dt.slots[i], dt.directions[i]);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return compare(a.second, b.second) < 0;
              });
    for (size_t i = 0; i < pairs.size(); ++i) {
      dt.slots[i] = pairs[i].first;
      dt.directions[i] = pairs[i].second;
    }
  }
  return Expr::diff(*dt.target, *dt.base, std::move(dt.directions),
                    std::move(dt.slots));
}

Expr canon(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
    case ExprKind::PointVar:
    case ExprKind::DirectionVar:
    case ExprKind::FuncSymbol:
    case ExprKind::Linear:
    case ExprKind::Power:
    case ExprKind::Exp:
      return e;
    case ExprKind::Tuple: {
      std::vector<Expr> elems;
      elems.reserve(e.children().size());
      for (const Expr& c : e.children()) elems.push_back(canon(c));
      return Expr::tuple(std::move(elems));
    }
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.children().size());
      for (const Expr& c : e.children()) terms.push_back(canon(c));
      return make_sum(std::move(terms));
    }
    case ExprKind::Product: {
      std::vector<Expr> factors;
      factors.reserve(e.children().size());
      for (const Expr& c : e.children()) factors.push_back(canon(c));
      return make_product(std::move(factors));
    }
    case ExprKind::Compose:
      return make_compose(canon(e.children()[0]), canon(e.children()[1]));
    case ExprKind::Apply: {
      Expr fn = canon(e.children()[0]);
      std::vector<Expr> args;
      args.reserve(e.children().size() - 1);
      for (size_t i = 1; i < e.children().size(); ++i)
        args.push_back(canon(e.children()[i]));
      return make_apply(fn, std::move(args));
    }
    case ExprKind::Diff: {
      const DiffTerm& src = e.diff_term();
      DiffTerm dt;
      dt.order = src.order;
      dt.target = std::make_shared<const Expr>(canon(*src.target));
      dt.base = std::make_shared<const Expr>(canon(*src.base));
      dt.directions.reserve(src.directions.size());
      for (const Expr& d : src.directions) dt.directions.push_back(canon(d));
      dt.slots = src.slots;
      return make_diff(std::move(dt));
    }
  }
  throw StructuralError("unknown node kind");
}

}  // namespace

Expr canonicalize(const Expr& e) { return canon(e); }

bool structural_equal(const Expr& a, const Expr& b) {
  return identical(canonicalize(a), canonicalize(b));
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_free(e, out);
  return out;
}

}  // namespace chaindiff
