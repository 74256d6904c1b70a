#include "chaindiff/diff.hpp"

#include <algorithm>
#include <set>

#include "chaindiff/combinatorics.hpp"

namespace chaindiff {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Chain: return "R-CHAIN";
    case Rule::Total: return "R-TOTAL";
    case Rule::Faa: return "R-FAA";
    case Rule::Leibniz: return "R-LEIBNIZ";
    case Rule::Lin: return "R-LIN";
    case Rule::Pow: return "R-POW";
    case Rule::Exp: return "R-EXP";
    case Rule::Const: return "R-CONST";
    case Rule::SumLinearity: return "R-SUM-LINEARITY";
    case Rule::Atom: return "R-ATOM";
  }
  return "?";
}

namespace {

bool contains_direction(const Expr& e, int index) {
  switch (e.kind()) {
    case ExprKind::DirectionVar:
      return e.index() == index;
    case ExprKind::Diff: {
      const DiffTerm& dt = e.diff_term();
      if (contains_direction(*dt.target, index)) return true;
      if (contains_direction(*dt.base, index)) return true;
      for (const Expr& d : dt.directions)
        if (contains_direction(d, index)) return true;
      return false;
    }
    default:
      for (const Expr& c : e.children())
        if (contains_direction(c, index)) return true;
      return false;
  }
}

void check_distinct(const std::vector<int>& directions) {
  std::set<int> seen;
  for (int i : directions) {
    if (i < 1) throw ArgumentError("direction indices must be >= 1");
    if (!seen.insert(i).second)
      throw ArgumentError("direction index " + std::to_string(i) +
                          " repeated in one differentiation call");
  }
}

void check_point(const Expr& point) {
  if (point.kind() != ExprKind::PointVar)
    throw ArgumentError("differentiation point must be a point variable");
}

struct DiffCtx {
  std::string point;
  int dir;
  std::vector<RuleTrace>* trace;

  void note(Rule r, const Expr& in, const Expr& out) const {
    if (trace) trace->push_back({r, in, canonicalize(out)});
  }
};

Expr d(const Expr& e, const DiffCtx& cx);

Expr d_apply(const Expr& e, const DiffCtx& cx) {
  const Expr& fn = e.children()[0];
  const Expr& u = e.children()[1];
  switch (fn.kind()) {
    case ExprKind::Exp: {
      Expr out = Expr::product({e, d(u, cx)});
      cx.note(Rule::Exp, e, out);
      return out;
    }
    case ExprKind::Power: {
      int k = fn.index();
      Expr out = Expr::product(
          {Expr::scalar(std::int64_t{k}), Expr::apply(Expr::power(k - 1), {u}),
           d(u, cx)});
      cx.note(Rule::Pow, e, out);
      return out;
    }
    case ExprKind::Linear: {
      Expr out = Expr::apply(fn, {d(u, cx)});
      cx.note(Rule::Lin, e, out);
      return out;
    }
    case ExprKind::FuncSymbol: {
      if (fn.arity() == 1) {
        bool at_point =
            u.kind() == ExprKind::PointVar && u.name() == cx.point;
        Expr out = Expr::diff(fn, u, {d(u, cx)});
        cx.note(at_point ? Rule::Atom : Rule::Chain, e, out);
        return out;
      }
      std::vector<Expr> args(e.children().begin() + 1, e.children().end());
      std::vector<Expr> terms;
      for (size_t j = 0; j < args.size(); ++j)
        terms.push_back(Expr::diff(fn, Expr::tuple(args), {d(args[j], cx)},
                                   {static_cast<int>(j + 1)}));
      Expr out = Expr::sum(std::move(terms));
      cx.note(Rule::Total, e, out);
      return out;
    }
    default:
      throw StructuralError(std::string("cannot differentiate application of ") +
                            kind_name(fn.kind()));
  }
}

// Differential of a differential term: one term bumping the order with the
// differentiated base, plus one term per differentiated direction.
Expr d_diff(const Expr& e, const DiffCtx& cx) {
  const DiffTerm& dt = e.diff_term();
  std::vector<Expr> terms;
  if (dt.slots.empty()) {
    std::vector<Expr> dirs = dt.directions;
    dirs.push_back(d(*dt.base, cx));
    terms.push_back(Expr::diff(*dt.target, *dt.base, std::move(dirs)));
  } else {
    const std::vector<Expr>& comps = dt.base->children();
    for (size_t m = 0; m < comps.size(); ++m) {
      std::vector<Expr> dirs = dt.directions;
      std::vector<int> slots = dt.slots;
      dirs.push_back(d(comps[m], cx));
      slots.push_back(static_cast<int>(m + 1));
      terms.push_back(
          Expr::diff(*dt.target, *dt.base, std::move(dirs), std::move(slots)));
    }
  }
  for (size_t j = 0; j < dt.directions.size(); ++j) {
    std::vector<Expr> dirs = dt.directions;
    dirs[j] = d(dirs[j], cx);
    terms.push_back(Expr::diff(*dt.target, *dt.base, std::move(dirs), dt.slots));
  }
  Expr out = Expr::sum(std::move(terms));
  cx.note(Rule::Chain, e, out);
  return out;
}

Expr d(const Expr& e, const DiffCtx& cx) {
  switch (e.kind()) {
    case ExprKind::Scalar: {
      Expr out = Expr::scalar(std::int64_t{0});
      cx.note(Rule::Const, e, out);
      return out;
    }
    case ExprKind::PointVar: {
      if (e.name() == cx.point) {
        Expr out = Expr::direction_var(cx.dir);
        cx.note(Rule::Atom, e, out);
        return out;
      }
      Expr out = Expr::scalar(std::int64_t{0});
      cx.note(Rule::Const, e, out);
      return out;
    }
    case ExprKind::DirectionVar: {
      Expr out = Expr::scalar(std::int64_t{0});
      cx.note(Rule::Const, e, out);
      return out;
    }
    case ExprKind::Tuple: {
      std::vector<Expr> comps;
      comps.reserve(e.children().size());
      for (const Expr& c : e.children()) comps.push_back(d(c, cx));
      return Expr::tuple(std::move(comps));
    }
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.children().size());
      for (const Expr& c : e.children()) terms.push_back(d(c, cx));
      Expr out = Expr::sum(std::move(terms));
      cx.note(Rule::SumLinearity, e, out);
      return out;
    }
    case ExprKind::Product: {
      std::vector<Expr> terms;
      for (size_t j = 0; j < e.children().size(); ++j) {
        std::vector<Expr> factors = e.children();
        factors[j] = d(factors[j], cx);
        terms.push_back(Expr::product(std::move(factors)));
      }
      Expr out = Expr::sum(std::move(terms));
      cx.note(Rule::Leibniz, e, out);
      return out;
    }
    case ExprKind::Apply:
      return d_apply(e, cx);
    case ExprKind::Diff:
      return d_diff(e, cx);
    default:
      throw StructuralError(std::string("cannot differentiate ") +
                            kind_name(e.kind()) + " node");
  }
}

Expr prepare(const Expr& e, const Expr& point, int direction_index) {
  check_point(point);
  if (direction_index < 1)
    throw ArgumentError("direction indices must be >= 1");
  Expr ce = canonicalize(e);
  if (contains_direction(ce, direction_index))
    throw ArgumentError("direction index " + std::to_string(direction_index) +
                        " already used in the expression");
  Role r = role_of(ce);
  if (r == Role::Mixed)
    throw StructuralError("expression mixes function and point values");
  if (r == Role::Function) ce = canonicalize(apply_at(ce, point));
  return ce;
}

}  // namespace

Expr chain_diff(const Expr& e, const Expr& point, int direction_index,
                std::vector<RuleTrace>* trace) {
  Expr ce = prepare(e, point, direction_index);
  DiffCtx cx{point.name(), direction_index, trace};
  return canonicalize(d(ce, cx));
}

Expr nth_chain_diff(const Expr& e, const Expr& point,
                    const std::vector<int>& directions,
                    std::vector<RuleTrace>* trace) {
  check_point(point);
  check_distinct(directions);
  Expr acc = canonicalize(e);
  if (directions.empty()) return acc;
  for (int i : directions) acc = chain_diff(acc, point, i, trace);
  return acc;
}

namespace {

void check_expansion_inputs(const Expr& f, const Expr& g, const Expr& point,
                            const std::vector<int>& directions) {
  check_point(point);
  check_distinct(directions);
  if (role_of(f) != Role::Function || role_of(g) != Role::Function)
    throw StructuralError("expansion needs function-valued operands");
  for (int i : directions)
    if (contains_direction(f, i) || contains_direction(g, i))
      throw ArgumentError("direction index " + std::to_string(i) +
                          " already used in the expression");
}

}  // namespace

std::vector<Expr> faa_di_bruno_terms(const Expr& f, const Expr& g,
                                     const Expr& point,
                                     const std::vector<int>& directions) {
  if (directions.empty())
    throw ArgumentError("higher-order chain rule needs at least one direction");
  check_expansion_inputs(f, g, point, directions);
  int n = static_cast<int>(directions.size());
  Expr cf = canonicalize(f);
  Expr cg = canonicalize(g);
  Expr inner_value = canonicalize(apply_at(cg, point));
  std::vector<Expr> terms;
  for (const Partition& pi : partitions(n)) {
    std::vector<Expr> outer_dirs;
    outer_dirs.reserve(pi.blocks.size());
    for (const auto& block : pi.blocks) {
      std::vector<Expr> block_dirs;
      block_dirs.reserve(block.size());
      for (int i : block)
        block_dirs.push_back(Expr::direction_var(directions[i - 1]));
      outer_dirs.push_back(Expr::diff(cg, point, std::move(block_dirs)));
    }
    terms.push_back(canonicalize(
        Expr::diff(cf, inner_value, std::move(outer_dirs))));
  }
  return terms;
}

Expr faa_di_bruno(const Expr& f, const Expr& g, const Expr& point,
                  const std::vector<int>& directions,
                  std::vector<RuleTrace>* trace) {
  std::vector<Expr> terms = faa_di_bruno_terms(f, g, point, directions);
  Expr out = canonicalize(Expr::sum(std::move(terms)));
  if (trace)
    trace->push_back(
        {Rule::Faa, canonicalize(apply_at(Expr::compose(f, g), point)), out});
  return out;
}

std::vector<Expr> leibniz_terms(const Expr& f, const Expr& g,
                                const Expr& point,
                                const std::vector<int>& directions) {
  check_expansion_inputs(f, g, point, directions);
  int n = static_cast<int>(directions.size());
  Expr cf = canonicalize(f);
  Expr cg = canonicalize(g);
  std::vector<Expr> terms;
  for (const IndexSubset& s : subsets(n)) {
    IndexSubset sc = complement(s);
    std::vector<Expr> f_dirs;
    for (int i : s.elements)
      f_dirs.push_back(Expr::direction_var(directions[i - 1]));
    std::vector<Expr> g_dirs;
    for (int i : sc.elements)
      g_dirs.push_back(Expr::direction_var(directions[i - 1]));
    Expr df = Expr::diff(cf, point, std::move(f_dirs));
    Expr dg = Expr::diff(cg, point, std::move(g_dirs));
    terms.push_back(canonicalize(Expr::product({df, dg})));
  }
  return terms;
}

Expr leibniz(const Expr& f, const Expr& g, const Expr& point,
             const std::vector<int>& directions,
             std::vector<RuleTrace>* trace) {
  std::vector<Expr> terms = leibniz_terms(f, g, point, directions);
  Expr out = canonicalize(Expr::sum(std::move(terms)));
  if (trace)
    trace->push_back(
        {Rule::Leibniz,
         canonicalize(apply_at(Expr::product({f, g}), point)), out});
  return out;
}

Expr total_diff(const Expr& f, const std::vector<Expr>& point_tuple,
                const std::vector<int>& direction_tuple,
                std::vector<RuleTrace>* trace) {
  if (f.kind() != ExprKind::FuncSymbol)
    throw ArgumentError("total differential needs a function symbol");
  int n = f.arity();
  if (static_cast<int>(point_tuple.size()) != n ||
      static_cast<int>(direction_tuple.size()) != n)
    throw ArgumentError("total differential of " + f.name() + " needs " +
                        std::to_string(n) + " point and direction components");
  std::vector<int> nonzero;
  for (int i : direction_tuple)
    if (i != 0) nonzero.push_back(i);
  check_distinct(nonzero);

  auto dir_expr = [](int i) {
    return i == 0 ? Expr::scalar(std::int64_t{0}) : Expr::direction_var(i);
  };
  Expr out;
  if (n == 1) {
    out = canonicalize(
        Expr::diff(f, point_tuple[0], {dir_expr(direction_tuple[0])}));
  } else {
    Expr base = Expr::tuple(point_tuple);
    std::vector<Expr> terms;
    for (int i = 0; i < n; ++i)
      terms.push_back(
          Expr::diff(f, base, {dir_expr(direction_tuple[i])}, {i + 1}));
    out = canonicalize(Expr::sum(std::move(terms)));
  }
  if (trace) {
    Expr in = n == 1 ? apply_at(f, point_tuple[0])
                     : apply_at(f, Expr::tuple(point_tuple));
    trace->push_back({Rule::Total, canonicalize(in), out});
  }
  return out;
}

namespace {

bool expandable_target(const Expr& target) {
  switch (target.kind()) {
    case ExprKind::Compose:
    case ExprKind::Sum:
    case ExprKind::Product:
      return true;
    default:
      return false;
  }
}

Expr expand_one(const Expr& e) {
  const DiffTerm& dt = e.diff_term();
  if (!expandable_target(*dt.target)) return e;
  if (dt.base->kind() != ExprKind::PointVar) return e;
  std::vector<int> indices;
  for (const Expr& d : dt.directions) {
    if (d.kind() != ExprKind::DirectionVar) return e;
    indices.push_back(d.index());
  }
  return nth_chain_diff(apply_at(*dt.target, *dt.base), *dt.base, indices);
}

Expr expand_rec(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Diff: {
      const DiffTerm& src = e.diff_term();
      std::vector<Expr> dirs;
      dirs.reserve(src.directions.size());
      for (const Expr& d : src.directions) dirs.push_back(expand_rec(d));
      Expr rebuilt = Expr::diff(*src.target, expand_rec(*src.base),
                                std::move(dirs), src.slots);
      Expr ce = canonicalize(rebuilt);
      if (ce.kind() != ExprKind::Diff) return ce;
      return canonicalize(expand_one(ce));
    }
    case ExprKind::Tuple:
    case ExprKind::Sum:
    case ExprKind::Product:
    case ExprKind::Apply: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const Expr& c : e.children()) kids.push_back(expand_rec(c));
      switch (e.kind()) {
        case ExprKind::Tuple: return Expr::tuple(std::move(kids));
        case ExprKind::Sum: return Expr::sum(std::move(kids));
        case ExprKind::Product: return Expr::product(std::move(kids));
        default: {
          Expr fn = kids[0];
          std::vector<Expr> args(kids.begin() + 1, kids.end());
          return Expr::apply(fn, std::move(args));
        }
      }
    }
    default:
      return e;
  }
}

}  // namespace

Expr expand_differentials(const Expr& e) {
  return canonicalize(expand_rec(canonicalize(e)));
}

}  // namespace chaindiff
