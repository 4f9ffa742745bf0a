#pragma once

#include <Eigen/Core>

#include "spod/core.hpp"

namespace spod {

using ColMatrix = Eigen::MatrixXd;

struct SvdResult {
  ColMatrix U;  // rows x r
  Vector S;     // r, nonincreasing
  ColMatrix V;  // cols x r
};

/// Leading r singular triplets via one-sided (Hestenes) Jacobi applied to
/// whichever of A, A^T has fewer columns. Requires 1 <= r <= min(rows, cols).
SvdResult truncated_svd(const ColMatrix& A, int r);

/// All min(rows, cols) singular values, nonincreasing.
Vector singular_values(const ColMatrix& A);

struct EigenPairs {
  Vector values;     // r, nonincreasing
  ColMatrix vectors;  // N x r, orthonormal
  int iterations = 0;
};

/// Leading r eigenpairs of a symmetric positive semidefinite matrix by block
/// subspace iteration with Rayleigh-Ritz. `basis`, when it has the right
/// shape, seeds the iteration and receives the final block for warm restarts.
EigenPairs leading_eigenpairs(const ColMatrix& K, int r, ColMatrix* basis = nullptr, double tol = 1e-11,
                              int max_iters = 2000);

}  // namespace spod
