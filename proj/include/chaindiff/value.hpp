#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "chaindiff/errors.hpp"

namespace chaindiff {

// Runtime value: a real, a vector in R^d or over grid nodes, or a tuple of
// values (one per argument slot of a multi-argument function).
class Value {
 public:
  enum class Kind { Scalar, Vector, Tuple };

  Value() : kind_(Kind::Scalar), s_(0.0) {}

  static Value scalar(double v) {
    Value x;
    x.kind_ = Kind::Scalar;
    x.s_ = v;
    return x;
  }
  static Value vector(std::vector<double> v) {
    Value x;
    x.kind_ = Kind::Vector;
    x.v_ = std::move(v);
    return x;
  }
  static Value tuple(std::vector<Value> items) {
    Value x;
    x.kind_ = Kind::Tuple;
    x.items_ = std::move(items);
    return x;
  }

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::Scalar; }
  double scalar_value() const {
    if (kind_ != Kind::Scalar) throw EvalError("expected a scalar value");
    return s_;
  }
  const std::vector<double>& vec() const {
    if (kind_ != Kind::Vector) throw EvalError("expected a vector value");
    return v_;
  }
  const std::vector<Value>& items() const {
    if (kind_ != Kind::Tuple) throw EvalError("expected a tuple value");
    return items_;
  }

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);  // pointwise; scalars broadcast
  Value scaled(double c) const;

  double norm() const;  // l2, tuples flattened
  std::string str() const;

 private:
  Kind kind_;
  double s_ = 0.0;
  std::vector<double> v_;
  std::vector<Value> items_;
};

Value exp_value(const Value& v);         // pointwise
Value pow_value(const Value& v, int k);  // pointwise

// ||a-b|| / (1 + max(||a||, ||b||))
double rel_dist(const Value& a, const Value& b);

}  // namespace chaindiff
