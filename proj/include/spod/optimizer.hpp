#pragma once

#include <limits>
#include <vector>

#include "spod/cost.hpp"
#include "spod/lbfgs.hpp"
#include "spod/svd.hpp"

namespace spod {

/// Which blocks of a Decomposition the optimizer may change.
struct VariableSet {
  bool coeffs = true;
  bool paths = true;
  bool modes = true;
};

struct OptimizerConfig {
  int max_iters = 2000;
  double grad_tol = 1e-10;
  int lbfgs_memory = 10;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  VariableSet variables;
  double C = 10.0;       // penalty bound
  double lambda = 0.0;   // penalty coefficient; 0 is the unconstrained problem
  int threads = 1;

  void validate() const;
  LbfgsConfig lbfgs() const;
};

struct OptimizerResult {
  Decomposition decomposition;
  std::vector<double> cost_history;
  std::vector<double> grad_norm_history;
  int iterations = 0;
  Termination termination = Termination::max_iters;
  /// Path-only mode: |J_lab - J_comoving| / (1/2 |z|^2), the interpolation
  /// defect of the co-moving shortcut. NaN for the full optimization.
  double isometry_defect = std::numeric_limits<double>::quiet_NaN();
};

/// Frame by frame: coeffs (column-major), path parameters, modes (row-major).
int packed_size(const Decomposition& d, const VariableSet& vars);
Vector pack(const Decomposition& d, const VariableSet& vars);
void unpack(const Vector& x, Decomposition& d, const VariableSet& vars);
Vector pack_gradient(const CostGradient& g, const Decomposition& d, const VariableSet& vars);

enum class ModeInit { first_snapshots, snapshot_then_zeros };

struct FrameInit {
  int rank = 1;
  PathRepr path;
  ModeInit modes = ModeInit::first_snapshots;
};

/// Modes from the data (first r snapshots, or first snapshot and zeros),
/// coefficients identically one, the given path guess.
Decomposition initial_decomposition(const SnapshotSet& z, const std::vector<FrameInit>& frames);

/// Nodal path p(t_k) = slope * t_k + intercept.
PathRepr linear_path(const TimeGrid& tgrid, double slope, double intercept = 0.0);

OptimizerResult optimize_decomposition(const SnapshotSet& z, const Decomposition& d0, const OptimizerConfig& cfg,
                                       const ProgressFn& progress = {});

/// Best rank-r approximation of the data shifted into the frame moving with
/// a fixed nodal path, and the envelope gradient of its cost.
struct ComovingFit {
  double cost = 0.0;   // 1/2 sum_k w_k |C_k - A_k|_X^2
  Vector path_grad;    // d cost / d p(t_k)
  Matrix modes;        // r x n, X-orthonormal, co-moving coordinates
  Matrix coeffs;       // (m+1) x r
  Vector sigma;        // leading singular values
};

ComovingFit comoving_fit(const SnapshotSet& z, const Vector& nodal_path, int r, ColMatrix* warm_basis = nullptr);

/// Optimizes only the path; coefficients and modes come from the co-moving
/// truncated SVD at every evaluation.
OptimizerResult optimize_path_only(const SnapshotSet& z, const PathRepr& path0, int r, const OptimizerConfig& cfg,
                                   const ProgressFn& progress = {});

}  // namespace spod
