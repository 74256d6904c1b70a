#include "chaindiff/fixtures.hpp"

#include <cmath>

namespace chaindiff {
namespace fixtures {

namespace {

// Euclidean(1) points travel as scalars, higher dimensions as vectors.
std::vector<double> components(const Value& v) {
  if (v.is_scalar()) return {v.scalar_value()};
  return v.vec();
}

double dot(const std::vector<double>& a, const Value& v) {
  std::vector<double> x = components(v);
  if (x.size() != a.size()) throw EvalError("dimension mismatch in dot product");
  double acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * x[i];
  return acc;
}

Value pack(std::vector<double> v) {
  if (v.size() == 1) return Value::scalar(v[0]);
  return Value::vector(std::move(v));
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& rows,
                            const Value& v) {
  std::vector<double> x = components(v);
  std::vector<double> out(rows.size(), 0.0);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != x.size())
      throw EvalError("dimension mismatch in matrix product");
    for (size_t j = 0; j < x.size(); ++j) out[i] += rows[i][j] * x[j];
  }
  return out;
}

}  // namespace

ConcreteFunc linear_functional(std::string name, std::vector<double> a) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(static_cast<int>(a.size()))};
  f.codomain = Codomain::real();
  f.evaluate = [a](const std::vector<Value>& args) {
    return Value::scalar(dot(a, args[0]));
  };
  f.exact_differential = [a](const std::vector<Value>&, const Value& d) {
    return Value::scalar(dot(a, d));
  };
  f.exact_nth = [a](const std::vector<Value>&, const std::vector<Value>& dirs) {
    if (dirs.size() == 1) return Value::scalar(dot(a, dirs[0]));
    return Value::scalar(0.0);
  };
  return f;
}

ConcreteFunc linear_map(std::string name,
                        std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw ArgumentError("linear map needs at least one row");
  int n = static_cast<int>(rows[0].size());
  int m = static_cast<int>(rows.size());
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(n)};
  f.codomain = m == 1 ? Codomain::real() : Codomain::of(ConcreteSpace::euclidean(m));
  f.evaluate = [rows](const std::vector<Value>& args) {
    return pack(mat_vec(rows, args[0]));
  };
  f.exact_differential = [rows](const std::vector<Value>&, const Value& d) {
    return pack(mat_vec(rows, d));
  };
  auto codomain = f.codomain;
  f.exact_nth = [rows, codomain](const std::vector<Value>&,
                                 const std::vector<Value>& dirs) {
    if (dirs.size() == 1) return pack(mat_vec(rows, dirs[0]));
    return codomain.zero();
  };
  return f;
}

ConcreteFunc quadratic_form(std::string name,
                            std::vector<std::vector<double>> a) {
  size_t n = a.size();
  for (auto& row : a)
    if (row.size() != n) throw ArgumentError("quadratic form matrix not square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double s = 0.5 * (a[i][j] + a[j][i]);
      a[i][j] = s;
      a[j][i] = s;
    }
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(static_cast<int>(n))};
  f.codomain = Codomain::real();
  f.evaluate = [a](const std::vector<Value>& args) {
    return Value::scalar(dot(components(pack(mat_vec(a, args[0]))), args[0]));
  };
  f.exact_differential = [a](const std::vector<Value>& p, const Value& d) {
    return Value::scalar(2.0 * dot(components(pack(mat_vec(a, p[0]))), d));
  };
  f.exact_nth = [a](const std::vector<Value>& p,
                    const std::vector<Value>& dirs) {
    if (dirs.size() == 1)
      return Value::scalar(2.0 * dot(components(pack(mat_vec(a, p[0]))), dirs[0]));
    if (dirs.size() == 2)
      return Value::scalar(2.0 *
                           dot(components(pack(mat_vec(a, dirs[0]))), dirs[1]));
    return Value::scalar(0.0);
  };
  return f;
}

namespace {
std::vector<double> derivative_coeffs(std::vector<double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> out(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) out[i - 1] = c[i] * static_cast<double>(i);
  return out;
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}
}  // namespace

ConcreteFunc polynomial(std::string name, std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs = {0.0};
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(1)};
  f.codomain = Codomain::real();
  f.evaluate = [coeffs](const std::vector<Value>& args) {
    return Value::scalar(horner(coeffs, args[0].scalar_value()));
  };
  f.exact_differential = [coeffs](const std::vector<Value>& p, const Value& d) {
    return Value::scalar(horner(derivative_coeffs(coeffs), p[0].scalar_value()) *
                         d.scalar_value());
  };
  f.exact_nth = [coeffs](const std::vector<Value>& p,
                         const std::vector<Value>& dirs) {
    std::vector<double> c = coeffs;
    for (size_t i = 0; i < dirs.size(); ++i) c = derivative_coeffs(std::move(c));
    double acc = horner(c, p[0].scalar_value());
    for (const Value& d : dirs) acc *= d.scalar_value();
    return Value::scalar(acc);
  };
  return f;
}

ConcreteFunc exp_linear(std::string name, std::vector<double> a) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(static_cast<int>(a.size()))};
  f.codomain = Codomain::real();
  f.evaluate = [a](const std::vector<Value>& args) {
    return Value::scalar(std::exp(dot(a, args[0])));
  };
  f.exact_differential = [a](const std::vector<Value>& p, const Value& d) {
    return Value::scalar(std::exp(dot(a, p[0])) * dot(a, d));
  };
  f.exact_nth = [a](const std::vector<Value>& p,
                    const std::vector<Value>& dirs) {
    double acc = std::exp(dot(a, p[0]));
    for (const Value& d : dirs) acc *= dot(a, d);
    return Value::scalar(acc);
  };
  return f;
}

ConcreteFunc grid_integration(std::string name, std::vector<double> weights) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::grid(static_cast<int>(weights.size()))};
  f.codomain = Codomain::real();
  f.evaluate = [weights](const std::vector<Value>& args) {
    return Value::scalar(dot(weights, args[0]));
  };
  f.exact_differential = [weights](const std::vector<Value>&, const Value& d) {
    return Value::scalar(dot(weights, d));
  };
  f.exact_nth = [weights](const std::vector<Value>&,
                          const std::vector<Value>& dirs) {
    if (dirs.size() == 1) return Value::scalar(dot(weights, dirs[0]));
    return Value::scalar(0.0);
  };
  return f;
}

ConcreteFunc abs_value(std::string name) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(1)};
  f.codomain = Codomain::real();
  f.evaluate = [](const std::vector<Value>& args) {
    return Value::scalar(std::abs(args[0].scalar_value()));
  };
  return f;
}

ConcreteFunc product_xy(std::string name) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(1), ConcreteSpace::euclidean(1)};
  f.codomain = Codomain::real();
  f.evaluate = [](const std::vector<Value>& args) {
    return Value::scalar(args[0].scalar_value() * args[1].scalar_value());
  };
  // F is bilinear: any repeated slot kills the term
  f.exact_partial = [](const std::vector<Value>& p, const std::vector<int>& slots,
                       const std::vector<Value>& dirs) {
    int k1 = 0, k2 = 0;
    double d1 = 1.0, d2 = 1.0;
    for (size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] == 1) {
        ++k1;
        d1 = dirs[i].scalar_value();
      } else {
        ++k2;
        d2 = dirs[i].scalar_value();
      }
    }
    if (k1 > 1 || k2 > 1) return Value::scalar(0.0);
    double x = k1 ? d1 : p[0].scalar_value();
    double y = k2 ? d2 : p[1].scalar_value();
    return Value::scalar(x * y);
  };
  f.exact_differential = [](const std::vector<Value>& p, const Value& d) {
    const auto& t = d.items();
    return Value::scalar(t[0].scalar_value() * p[1].scalar_value() +
                         p[0].scalar_value() * t[1].scalar_value());
  };
  f.exact_nth = [](const std::vector<Value>& p, const std::vector<Value>& dirs) {
    if (dirs.size() == 1) {
      const auto& t = dirs[0].items();
      return Value::scalar(t[0].scalar_value() * p[1].scalar_value() +
                           p[0].scalar_value() * t[1].scalar_value());
    }
    if (dirs.size() == 2) {
      const auto& u = dirs[0].items();
      const auto& v = dirs[1].items();
      return Value::scalar(u[0].scalar_value() * v[1].scalar_value() +
                           v[0].scalar_value() * u[1].scalar_value());
    }
    return Value::scalar(0.0);
  };
  return f;
}

ConcreteFunc bivariate_mix(std::string name) {
  ConcreteFunc f;
  f.name = std::move(name);
  f.domain = {ConcreteSpace::euclidean(1), ConcreteSpace::euclidean(1)};
  f.codomain = Codomain::real();
  f.evaluate = [](const std::vector<Value>& args) {
    double x = args[0].scalar_value();
    double y = args[1].scalar_value();
    return Value::scalar(x * x * y + std::exp(y));
  };
  return f;
}

}  // namespace fixtures
}  // namespace chaindiff
