#pragma once

#include <vector>

#include "psdrank/polynomial.hpp"

namespace psdrank {

/// y^d * f(x / y) with d = deg f; every term gets total degree d.
Polynomial homogenize(const Polynomial& f, VarId hom_var);

struct BoundedInstance {
  Polynomial phi;
  // phi is the expanded sum of squares of these polynomials, in order:
  // (y_{j+1} - y_j^2) for j < m, (2 y_0 - 1), (x_i^2 + z_i^2 - 1) per variable, h.
  std::vector<Polynomial> summands;
  unsigned m = 0;
  unsigned degree = 0;
  std::vector<VarId> x_vars;  // variables of f, sorted
  std::vector<VarId> y_vars;  // y_0 .. y_m
  std::vector<VarId> z_vars;  // z_i paired with x_vars[i]
  Polynomial homogenized;
};

/// Builds phi whose real zeros all lie in the unit cube. Every variable of
/// f is treated as a coordinate of the cube; f may not use y or z names.
BoundedInstance build_phi(const Polynomial& f, unsigned m);

/// A scaled copy of a root of f: x_i = 2^{-2^m} xi_i, y_j = 2^{-2^j},
/// z_i^2 = 1 - x_i^2. The z_i are often irrational, so they are kept as
/// squares in `z_squared`; `approx` holds every value as a double.
struct ScaledRoot {
  ExactPoint exact;      // x and y values
  ExactPoint z_squared;  // z_i -> z_i^2
  FloatPoint approx;     // x, y and z values
  bool z_rational = false;
  ExactPoint full_exact() const;  // requires z_rational
};

/// Throws out_of_range if some |xi_i| >= 2^{2^m}, missing_binding if xi
/// does not bind every x variable.
ScaledRoot scale_root(const BoundedInstance& instance, const ExactPoint& xi);

/// phi evaluated exactly, substituting z_i^2 = 1 - x_i^2 symbolically.
Rational evaluate_phi_exact(const BoundedInstance& instance, const ScaledRoot& root);

double evaluate_phi_float(const BoundedInstance& instance, const FloatPoint& point);

}  // namespace psdrank
