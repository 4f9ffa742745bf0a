#include <algorithm>
#include <cmath>

#include "spod/optimizer.hpp"
#include "spod/shift_fem.hpp"

namespace spod {

ComovingFit comoving_fit(const SnapshotSet& z, const Vector& p, int r, ColMatrix* warm_basis) {
  const int nt = z.nt();
  const int n = z.nx();
  if (p.size() != nt) throw DimensionError("comoving_fit: path length does not match time grid");
  if (r < 1 || r > std::min(nt, n))
    throw InvalidArgument("path-only rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(nt, n)) + "]");
  const ShiftGram mass = gram_F(0.0, z.grid);

  // rows: sqrt(w_k) C_k and sqrt(w_k) F(0) C_k, with C_k = T(-p_k) z_k
  Matrix X(nt, n), MX(nt, n);
  Vector sw(nt);
  for (int k = 0; k < nt; ++k) {
    sw[k] = std::sqrt(z.tgrid.w(k));
    shift_field(-p[k], z.values.row(k).data(), X.row(k).data(), z.grid);
    X.row(k) *= sw[k];
    apply_gram(mass, X.row(k).data(), MX.row(k).data());
  }
  // K = W^{1/2} C F(0) C^T W^{1/2}: Gram of the weighted co-moving matrix on the time side
  ColMatrix K = X * MX.transpose();
  K = 0.5 * (K + K.transpose()).eval();
  const EigenPairs eig = leading_eigenpairs(K, r, warm_basis);

  ComovingFit fit;
  fit.sigma = eig.values.cwiseMax(0.0).cwiseSqrt();
  // best rank-r approximation of X in the X-norm: U U^T X
  const ColMatrix Ut_X = eig.vectors.transpose() * X;  // r x n
  Matrix A = eig.vectors * Ut_X;                        // weighted, nt x n
  fit.modes.resize(r, n);
  fit.coeffs.resize(nt, r);
  for (int i = 0; i < r; ++i) {
    const double s = fit.sigma[i];
    fit.modes.row(i) = s > 0.0 ? (Ut_X.row(i) / s).eval() : Eigen::RowVectorXd::Zero(n);
    for (int k = 0; k < nt; ++k) fit.coeffs(k, i) = eig.vectors(k, i) * s / sw[k];
  }

  fit.cost = 0.0;
  fit.path_grad.resize(nt);
  Vector e(n), me(n), dc(n);
  for (int k = 0; k < nt; ++k) {
    e = (X.row(k) - A.row(k)).transpose() / sw[k];
    apply_gram(mass, e.data(), me.data());
    fit.cost += 0.5 * z.tgrid.w(k) * e.dot(me);
    // envelope: d/dp_k of 1/2 w_k |C_k - A_k|^2 with A fixed; dC_k/dp_k = -T'(-p_k) z_k
    shift_field_derivative(-p[k], z.values.row(k).data(), dc.data(), z.grid);
    fit.path_grad[k] = -z.tgrid.w(k) * me.dot(dc);
  }
  return fit;
}

OptimizerResult optimize_path_only(const SnapshotSet& z, const PathRepr& path0, int r, const OptimizerConfig& cfg,
                                   const ProgressFn& progress) {
  if (!(cfg.max_iters >= 1)) throw InvalidArgument("max_iters must be at least 1");
  cfg.lbfgs().validate();
  path0.validate(z.tgrid);
  if (r < 1 || r > std::min(z.nt(), z.nx()))
    throw InvalidArgument("path-only rank " + std::to_string(r) + " outside [1, " +
                          std::to_string(std::min(z.nt(), z.nx())) + "]");

  PathRepr path = path0;
  ColMatrix basis;
  auto objective = [&](const Vector& x, Vector& grad) {
    path.parameters() = x;
    const ComovingFit fit = comoving_fit(z, path.evaluate(z.tgrid), r, &basis);
    grad = path.pull_back(fit.path_grad, z.tgrid);
    return fit.cost;
  };
  const LbfgsResult lr = lbfgs_minimize(objective, path0.parameters(), cfg.lbfgs(), progress);

  path.parameters() = lr.x;
  const ComovingFit fit = comoving_fit(z, path.evaluate(z.tgrid), r, &basis);
  Decomposition d{{Frame{path, fit.modes, fit.coeffs}}, z.grid, z.tgrid};

  OptimizerResult out{d, lr.cost_history, lr.grad_norm_history, lr.iterations, lr.termination};
  const double lab = eval_cost(z, d, EvalOptions{cfg.threads});
  Decomposition zero = d;
  zero.frames[0].coeffs.setZero();
  const double half_norm = eval_cost(z, zero);
  out.isometry_defect = half_norm > 0.0 ? std::abs(lab - fit.cost) / half_norm : 0.0;
  return out;
}

}  // namespace spod
