#pragma once

#include <vector>

#include "spod/decomposition.hpp"

namespace spod {

struct EvalOptions {
  /// Time indices are split into this many contiguous chunks and reduced in
  /// chunk order, so results are reproducible for a given thread count.
  int threads = 1;
};

struct FrameGradient {
  Matrix coeffs;  // (m+1) x r
  Vector path;    // one entry per path parameter
  Matrix modes;   // r x n
};

struct CostGradient {
  double value = 0.0;
  std::vector<FrameGradient> frames;
};

/// Nodal reconstruction sum_rho sum_i alpha T(p) phi via shift_field.
SnapshotSet reconstruct(const Decomposition& d);

/// J = 1/2 sum_k w_k |z_k - g_k|_X^2 assembled from the shifted Gram matrices.
double eval_cost(const SnapshotSet& z, const Decomposition& d, const EvalOptions& opt = {});

/// J together with dJ/dalpha, dJ/dp (pulled back to the path parameters), dJ/dphi.
CostGradient eval_cost_gradient(const SnapshotSet& z, const Decomposition& d, const EvalOptions& opt = {});

/// Discrete norms entering the penalty for one (frame, mode) pair.
struct PairNorms {
  double coeff = 0.0;  // |alpha_i|_{L2(0,T)}
  double path = 0.0;   // |p_rho|_{H1(0,T)}
  double mode = 0.0;   // |phi_i|_{H1}
};

double coeff_norm(const Vector& alpha, const TimeGrid& tgrid);
double path_h1_norm(const Vector& nodal_path, const TimeGrid& tgrid);
double mode_h1_norm(const Vector& phi, const SpatialGrid& grid);
std::vector<PairNorms> pair_norms(const Decomposition& d);

/// sum over (frame, mode) of max{0, max(norms) - C}.
double penalty_value(const Decomposition& d, double C);
/// Every discrete norm <= C.
bool is_admissible(const Decomposition& d, double C);

/// eval_cost + lambda * penalty_value.
double eval_penalized_cost(const SnapshotSet& z, const Decomposition& d, double C, double lambda,
                           const EvalOptions& opt = {});

}  // namespace spod
