#pragma once

#include <array>
#include <iosfwd>

#include "spod/core.hpp"

namespace spod {

/// p = q*h + frac (mod L) with q in [0, n) and frac in [0, h). Shifts within
/// a few ulps of a cell boundary snap onto it.
struct ShiftSplit {
  int q = 0;
  double frac = 0.0;
};

ShiftSplit decompose_shift(double p, const SpatialGrid& grid);

/// Banded circulant n x n matrix. Entry (k, l) equals band[j] when
/// l == k + (j - 2) - offset (mod n), j = 0..3, i.e. the band holds the
/// (k-2, k-1, k, k+1) diagonals before the whole-cell offset is applied.
/// Coinciding diagonals (n = 3) add.
struct ShiftGram {
  int offset = 0;
  double frac = 0.0;
  std::array<double, 4> band{};
  int n = 0;
  double h = 0.0;
};

/// [F(p)]_{k,l} = <psi_k, T(p) psi_l> for periodic P1 hat functions.
ShiftGram gram_F(double p, const SpatialGrid& grid);
/// [G(p)]_{k,l} = <psi_k, d/dp T(p) psi_l>; one-sided (from above) at cell boundaries.
ShiftGram gram_G(double p, const SpatialGrid& grid);
/// M(p_i, p_j) = F(p_i - p_j), N(p_i, p_j) = G(p_i - p_j) (unitary semigroup).
ShiftGram gram_M(double p_i, double p_j, const SpatialGrid& grid);
ShiftGram gram_N(double p_i, double p_j, const SpatialGrid& grid);
/// P1 stiffness matrix <psi_k', psi_l'>.
ShiftGram stiffness_gram(const SpatialGrid& grid);

/// out = A v in O(n).
void apply_gram(const ShiftGram& a, const double* v, double* out);
Vector apply_gram(const ShiftGram& a, const Vector& v);
/// out = A^T v in O(n), i.e. the row vector v^T A.
void apply_gram_transpose(const ShiftGram& a, const double* v, double* out);
Vector apply_gram_transpose(const ShiftGram& a, const Vector& v);

Matrix to_dense(const ShiftGram& a);
/// Dense matrix as CSV, for debugging and test tooling.
void write_dense_csv(const ShiftGram& a, std::ostream& out);

/// Nodal values of T(p)v: the periodic P1 function with coefficients v,
/// evaluated at x_l - p. Exact index rotation when p is a whole number of cells.
Vector shift_field(double p, const Vector& v, const SpatialGrid& grid);
void shift_field(double p, const double* v, double* out, const SpatialGrid& grid);

/// d/dp of shift_field(p, v) (piecewise constant in p, right-continuous).
Vector shift_field_derivative(double p, const Vector& v, const SpatialGrid& grid);
void shift_field_derivative(double p, const double* v, double* out, const SpatialGrid& grid);

/// Independent quadrature of <sum a_l psi_l, T(p) sum b_l psi_l> (or, with
/// derivative = true, of <sum a_l psi_l, d/dp T(p) sum b_l psi_l>). Composite
/// midpoint rule on the sub-intervals between the kinks of both factors, with
/// about `panels` midpoints in total. Does not use the closed forms.
double quadrature_inner_oracle(const Vector& a, const Vector& b, double p, const SpatialGrid& grid,
                               long panels, bool derivative = false);

}  // namespace spod
