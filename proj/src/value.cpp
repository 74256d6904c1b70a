#include "chaindiff/value.hpp"

#include <algorithm>
#include <charconv>

namespace chaindiff {

namespace {

void check_same_shape(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) throw EvalError("value shape mismatch");
  if (a.kind() == Value::Kind::Vector && a.vec().size() != b.vec().size())
    throw EvalError("vector dimension mismatch: " +
                    std::to_string(a.vec().size()) + " vs " +
                    std::to_string(b.vec().size()));
  if (a.kind() == Value::Kind::Tuple && a.items().size() != b.items().size())
    throw EvalError("tuple arity mismatch");
}

}  // namespace

Value operator+(const Value& a, const Value& b) {
  check_same_shape(a, b);
  switch (a.kind()) {
    case Value::Kind::Scalar:
      return Value::scalar(a.scalar_value() + b.scalar_value());
    case Value::Kind::Vector: {
      std::vector<double> out(a.vec().size());
      for (size_t i = 0; i < out.size(); ++i) out[i] = a.vec()[i] + b.vec()[i];
      return Value::vector(std::move(out));
    }
    case Value::Kind::Tuple: {
      std::vector<Value> out;
      out.reserve(a.items().size());
      for (size_t i = 0; i < a.items().size(); ++i)
        out.push_back(a.items()[i] + b.items()[i]);
      return Value::tuple(std::move(out));
    }
  }
  throw EvalError("bad value kind");
}

Value operator-(const Value& a, const Value& b) { return a + b.scaled(-1.0); }

Value operator*(const Value& a, const Value& b) {
  if (a.kind() == Value::Kind::Scalar && b.kind() != Value::Kind::Tuple)
    return b.scaled(a.scalar_value());
  if (b.kind() == Value::Kind::Scalar && a.kind() != Value::Kind::Tuple)
    return a.scaled(b.scalar_value());
  if (a.kind() == Value::Kind::Vector && b.kind() == Value::Kind::Vector) {
    if (a.vec().size() != b.vec().size())
      throw EvalError("vector dimension mismatch in product");
    std::vector<double> out(a.vec().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a.vec()[i] * b.vec()[i];
    return Value::vector(std::move(out));
  }
  throw EvalError("cannot multiply these value shapes");
}

Value Value::scaled(double c) const {
  switch (kind_) {
    case Kind::Scalar:
      return scalar(s_ * c);
    case Kind::Vector: {
      std::vector<double> out(v_.size());
      for (size_t i = 0; i < out.size(); ++i) out[i] = v_[i] * c;
      return vector(std::move(out));
    }
    case Kind::Tuple: {
      std::vector<Value> out;
      out.reserve(items_.size());
      for (const Value& x : items_) out.push_back(x.scaled(c));
      return tuple(std::move(out));
    }
  }
  throw EvalError("bad value kind");
}

double Value::norm() const {
  switch (kind_) {
    case Kind::Scalar:
      return std::abs(s_);
    case Kind::Vector: {
      double acc = 0;
      for (double x : v_) acc += x * x;
      return std::sqrt(acc);
    }
    case Kind::Tuple: {
      double acc = 0;
      for (const Value& x : items_) {
        double n = x.norm();
        acc += n * n;
      }
      return std::sqrt(acc);
    }
  }
  return 0;
}

namespace {
std::string num_str(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}
}  // namespace

std::string Value::str() const {
  switch (kind_) {
    case Kind::Scalar:
      return num_str(s_);
    case Kind::Vector: {
      std::string s = "(";
      for (size_t i = 0; i < v_.size(); ++i) {
        if (i) s += ",";
        s += num_str(v_[i]);
      }
      return s + ")";
    }
    case Kind::Tuple: {
      std::string s = "[";
      for (size_t i = 0; i < items_.size(); ++i) {
        if (i) s += ";";
        s += items_[i].str();
      }
      return s + "]";
    }
  }
  return "?";
}

Value exp_value(const Value& v) {
  if (v.kind() == Value::Kind::Scalar)
    return Value::scalar(std::exp(v.scalar_value()));
  if (v.kind() == Value::Kind::Vector) {
    std::vector<double> out(v.vec().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(v.vec()[i]);
    return Value::vector(std::move(out));
  }
  throw EvalError("exp of a tuple value");
}

Value pow_value(const Value& v, int k) {
  if (v.kind() == Value::Kind::Scalar)
    return Value::scalar(std::pow(v.scalar_value(), k));
  if (v.kind() == Value::Kind::Vector) {
    std::vector<double> out(v.vec().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::pow(v.vec()[i], k);
    return Value::vector(std::move(out));
  }
  throw EvalError("power of a tuple value");
}

double rel_dist(const Value& a, const Value& b) {
  double d = (a - b).norm();
  return d / (1.0 + std::max(a.norm(), b.norm()));
}

}  // namespace chaindiff
