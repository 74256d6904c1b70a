#pragma once

#include <string>
#include <vector>

#include "chaindiff/numeric.hpp"

namespace chaindiff {
namespace fixtures {

// x -> <a, x> on R^d
ConcreteFunc linear_functional(std::string name, std::vector<double> a);

// x -> A x, rows of A given row-major; R^n -> R^m
ConcreteFunc linear_map(std::string name, std::vector<std::vector<double>> rows);

// x -> <x, A x>; A is symmetrized on construction
ConcreteFunc quadratic_form(std::string name, std::vector<std::vector<double>> a);

// t -> sum c_i t^i on R
ConcreteFunc polynomial(std::string name, std::vector<double> coeffs);

// x -> exp(<a, x>)
ConcreteFunc exp_linear(std::string name, std::vector<double> a);

// mu -> sum w_i mu(t_i) on grid functions
ConcreteFunc grid_integration(std::string name, std::vector<double> weights);

// t -> |t|; not differentiable at 0, no exact hooks
ConcreteFunc abs_value(std::string name);

// (x, y) -> x*y on R x R, with exact partial differentials
ConcreteFunc product_xy(std::string name);

// (x, y) -> x^2 y + exp(y), smooth bivariate without exact hooks
ConcreteFunc bivariate_mix(std::string name);

}  // namespace fixtures
}  // namespace chaindiff
