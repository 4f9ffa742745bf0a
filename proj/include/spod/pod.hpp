#pragma once

#include "spod/decomposition.hpp"
#include "spod/svd.hpp"

namespace spod {

struct PodResult {
  Matrix modes;            // r x n, orthonormal in the L2 (mass-matrix) inner product
  Matrix coeffs;           // (m+1) x r, alpha_i(t_k) = z_k^T F(0) phi_i
  Vector singular_values;  // full spectrum of the weighted snapshot matrix
};

/// Symmetric square root of the P1 mass matrix F(0) and its inverse, from the
/// eigenvalues of the symmetric circulant.
struct MassFactor {
  ColMatrix sqrt;
  ColMatrix inv_sqrt;
};
MassFactor mass_matrix_sqrt(const SpatialGrid& grid);

/// Weighted POD: SVD of W^{1/2} Z F(0)^{1/2}, modes mapped back through F(0)^{-1/2}.
PodResult pod(const SnapshotSet& z, int r);

/// Rank-r POD as a single stationary frame (zero path).
Decomposition pod_decomposition(const SnapshotSet& z, const PodResult& p);

/// Relative error in the discrete L2(0,T; X) norm that POD minimizes
/// (trapezoid in time, P1 mass matrix in space).
double relative_x_error(const SnapshotSet& z, const SnapshotSet& zhat);

}  // namespace spod
