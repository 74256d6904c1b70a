#include "chaindiff/serialize.hpp"

#include <charconv>
#include <cmath>

namespace chaindiff {

json to_json(const Expr& e) {
  json j;
  j["kind"] = kind_name(e.kind());
  switch (e.kind()) {
    case ExprKind::Scalar: {
      const Rational& r = e.scalar_value();
      if (r.exact()) {
        j["num"] = r.num();
        j["den"] = r.den();
      } else {
        j["value"] = r.value();
      }
      break;
    }
    case ExprKind::PointVar:
    case ExprKind::Linear:
      j["name"] = e.name();
      break;
    case ExprKind::FuncSymbol:
      j["name"] = e.name();
      j["arity"] = e.arity();
      break;
    case ExprKind::DirectionVar:
      j["index"] = e.index();
      break;
    case ExprKind::Power:
      j["exponent"] = e.index();
      break;
    case ExprKind::Exp:
      break;
    case ExprKind::Tuple:
    case ExprKind::Sum:
    case ExprKind::Product: {
      json arr = json::array();
      for (const Expr& c : e.children()) arr.push_back(to_json(c));
      j[e.kind() == ExprKind::Tuple ? "elements"
                                    : e.kind() == ExprKind::Sum ? "terms"
                                                                : "factors"] =
          std::move(arr);
      break;
    }
    case ExprKind::Compose:
      j["outer"] = to_json(e.children()[0]);
      j["inner"] = to_json(e.children()[1]);
      break;
    case ExprKind::Apply: {
      j["func"] = to_json(e.children()[0]);
      json arr = json::array();
      for (size_t i = 1; i < e.children().size(); ++i)
        arr.push_back(to_json(e.children()[i]));
      j["args"] = std::move(arr);
      break;
    }
    case ExprKind::Diff: {
      const DiffTerm& dt = e.diff_term();
      j["order"] = dt.order;
      j["target"] = to_json(*dt.target);
      j["base"] = to_json(*dt.base);
      json arr = json::array();
      for (const Expr& d : dt.directions) arr.push_back(to_json(d));
      j["directions"] = std::move(arr);
      if (!dt.slots.empty()) j["slots"] = dt.slots;
      break;
    }
  }
  return j;
}

namespace {

std::vector<Expr> exprs_from_json(const json& arr) {
  if (!arr.is_array()) throw ArgumentError("expected a JSON array of nodes");
  std::vector<Expr> out;
  out.reserve(arr.size());
  for (const json& c : arr) out.push_back(expr_from_json(c));
  return out;
}

}  // namespace

Expr expr_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ArgumentError("JSON node missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Scalar") {
    if (j.contains("value")) return Expr::scalar(j.at("value").get<double>());
    return Expr::scalar(Rational::ratio(j.at("num").get<std::int64_t>(),
                                        j.at("den").get<std::int64_t>()));
  }
  if (kind == "PointVar") return Expr::point_var(j.at("name").get<std::string>());
  if (kind == "DirectionVar") return Expr::direction_var(j.at("index").get<int>());
  if (kind == "FuncSymbol")
    return Expr::func_symbol(j.at("name").get<std::string>(),
                             j.value("arity", 1));
  if (kind == "Linear") return Expr::linear(j.at("name").get<std::string>());
  if (kind == "Power") return Expr::power(j.at("exponent").get<int>());
  if (kind == "Exp") return Expr::exp_fn();
  if (kind == "Tuple") return Expr::tuple(exprs_from_json(j.at("elements")));
  if (kind == "Sum") return Expr::sum(exprs_from_json(j.at("terms")));
  if (kind == "Product") return Expr::product(exprs_from_json(j.at("factors")));
  if (kind == "Compose")
    return Expr::compose(expr_from_json(j.at("outer")),
                         expr_from_json(j.at("inner")));
  if (kind == "Apply")
    return Expr::apply(expr_from_json(j.at("func")),
                       exprs_from_json(j.at("args")));
  if (kind == "Diff") {
    std::vector<int> slots;
    if (j.contains("slots")) slots = j.at("slots").get<std::vector<int>>();
    return Expr::diff(expr_from_json(j.at("target")),
                      expr_from_json(j.at("base")),
                      exprs_from_json(j.at("directions")), std::move(slots));
  }
  throw ArgumentError("unknown JSON node kind \"" + kind + "\"");
}

namespace {

// 0 = sum, 1 = product, 2 = compose, 3 = prefix constructs, 4 = atoms
int print_level(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Sum: return 0;
    case ExprKind::Product: return 1;
    case ExprKind::Compose: return 2;
    case ExprKind::Diff: return 3;
    case ExprKind::Scalar: {
      const Rational& r = e.scalar_value();
      return r.value() < 0 ? 3 : 4;
    }
    default: return 4;
  }
}

std::string float_str(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  // keep a decimal marker so a whole-valued real does not read back exact
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string scalar_str(const Rational& r) {
  if (!r.exact()) return float_str(r.value());
  if (r.den() == 1) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

std::string print(const Expr& e, int min_level);

std::string print_raw(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return scalar_str(e.scalar_value());
    case ExprKind::PointVar:
    case ExprKind::FuncSymbol:
      return e.name();
    case ExprKind::DirectionVar:
      return "e" + std::to_string(e.index());
    case ExprKind::Linear:
      return "lin[" + e.name() + "]";
    case ExprKind::Power:
      return "pow[" + std::to_string(e.index()) + "]";
    case ExprKind::Exp:
      return "exp";
    case ExprKind::Tuple: {
      std::string s = "(";
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += ", ";
        s += print(e.children()[i], 0);
      }
      return s + ")";
    }
    case ExprKind::Sum: {
      std::string s;
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += " + ";
        s += print(e.children()[i], 1);
      }
      return s;
    }
    case ExprKind::Product: {
      std::string s;
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += " * ";
        s += print(e.children()[i], 2);
      }
      return s;
    }
    case ExprKind::Compose: {
      std::vector<const Expr*> chain;
      const Expr* cur = &e;
      while (cur->kind() == ExprKind::Compose) {
        chain.push_back(&cur->children()[0]);
        cur = &cur->children()[1];
      }
      chain.push_back(cur);
      std::string s;
      for (size_t i = 0; i < chain.size(); ++i) {
        if (i) s += " o ";
        s += print(*chain[i], 3);
      }
      return s;
    }
    case ExprKind::Apply: {
      const Expr& fn = e.children()[0];
      bool atomic = fn.kind() == ExprKind::FuncSymbol ||
                    fn.kind() == ExprKind::Linear ||
                    fn.kind() == ExprKind::Power || fn.kind() == ExprKind::Exp;
      std::string s = atomic ? print_raw(fn) : "(" + print_raw(fn) + ")";
      s += "(";
      for (size_t i = 1; i < e.children().size(); ++i) {
        if (i > 1) s += ", ";
        s += print(e.children()[i], 0);
      }
      return s + ")";
    }
    case ExprKind::Diff: {
      const DiffTerm& dt = e.diff_term();
      std::string s = "D";
      if (!dt.slots.empty()) {
        if (dt.slots.size() == 1) {
          s += "_" + std::to_string(dt.slots[0]);
        } else {
          s += "_{";
          for (size_t i = 0; i < dt.slots.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(dt.slots[i]);
          }
          s += "}";
        }
      }
      s += "[";
      for (size_t i = 0; i < dt.directions.size(); ++i) {
        if (i) s += ", ";
        // A bare integer in a direction list reads back as a direction
        // index, so literal scalar directions keep their parentheses.
        if (dt.directions[i].kind() == ExprKind::Scalar)
          s += "(" + print(dt.directions[i], 0) + ")";
        else
          s += print(dt.directions[i], 0);
      }
      s += "] " + print(*dt.target, 4) + " @ " + print(*dt.base, 4);
      return s;
    }
  }
  throw StructuralError("unknown node kind");
}

std::string print(const Expr& e, int min_level) {
  std::string s = print_raw(e);
  if (print_level(e) < min_level) return "(" + s + ")";
  return s;
}

}  // namespace

std::string to_dsl(const Expr& e) { return print(e, 0); }

}  // namespace chaindiff
