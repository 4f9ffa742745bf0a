#include "spod/pod.hpp"

#include <cmath>
#include <numbers>

#include "spod/shift_fem.hpp"

namespace spod {

MassFactor mass_matrix_sqrt(const SpatialGrid& grid) {
  const int n = grid.n();
  const Matrix mass = to_dense(gram_F(0.0, grid));
  // eigenvalues of a symmetric circulant with first row c: lambda_j = sum_l c_l cos(2 pi j l / n)
  std::vector<double> cosines(n);
  for (int i = 0; i < n; ++i) cosines[i] = std::cos(2.0 * std::numbers::pi * i / n);
  Vector lambda = Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) lambda[j] += mass(0, l) * cosines[(static_cast<long>(j) * l) % n];

  Vector root(n), inv_root(n);
  for (int l = 0; l < n; ++l) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < n; ++j) {
      const double c = cosines[(static_cast<long>(j) * l) % n];
      a += std::sqrt(lambda[j]) * c;
      b += c / std::sqrt(lambda[j]);
    }
    root[l] = a / n;
    inv_root[l] = b / n;
  }
  MassFactor out{ColMatrix(n, n), ColMatrix(n, n)};
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const int d = ((l - k) % n + n) % n;
      out.sqrt(k, l) = root[d];
      out.inv_sqrt(k, l) = inv_root[d];
    }
  return out;
}

PodResult pod(const SnapshotSet& z, int r) {
  const int nt = z.nt();
  const int n = z.nx();
  if (r < 1 || r > std::min(nt, n))
    throw InvalidArgument("pod: rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(nt, n)) + "]");
  const MassFactor mf = mass_matrix_sqrt(z.grid);
  ColMatrix B = z.values * mf.sqrt;
  for (int k = 0; k < nt; ++k) B.row(k) *= std::sqrt(z.tgrid.w(k));

  const SvdResult full = truncated_svd(B, std::min(nt, n));
  PodResult out;
  out.singular_values = full.S;
  out.modes = (mf.inv_sqrt * full.V.leftCols(r)).transpose();
  const Matrix mass_modes = (to_dense(gram_F(0.0, z.grid)) * out.modes.transpose()).transpose();
  out.coeffs = z.values * mass_modes.transpose();
  return out;
}

Decomposition pod_decomposition(const SnapshotSet& z, const PodResult& p) {
  Frame f{PathRepr::nodal(Vector::Zero(z.nt())), p.modes, p.coeffs};
  return Decomposition{{std::move(f)}, z.grid, z.tgrid};
}

double relative_x_error(const SnapshotSet& z, const SnapshotSet& zhat) {
  if (!(z.grid == zhat.grid) || !(z.tgrid == zhat.tgrid)) throw DimensionError("relative_x_error: grids differ");
  const ShiftGram mass = gram_F(0.0, z.grid);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < z.nt(); ++k) {
    const Vector zk = z.values.row(k).transpose();
    const Vector ek = zk - zhat.values.row(k).transpose();
    num += z.tgrid.w(k) * ek.dot(apply_gram(mass, ek));
    den += z.tgrid.w(k) * zk.dot(apply_gram(mass, zk));
  }
  if (den == 0.0) throw NumericalError("relative_x_error: reference field is identically zero");
  return std::sqrt(num / den);
}

}  // namespace spod
