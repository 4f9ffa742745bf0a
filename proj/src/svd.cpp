#include "spod/svd.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace spod {

namespace {

// Orthogonalizes the columns of W in place; V accumulates the rotations.
void hestenes(ColMatrix& W, ColMatrix& V) {
  const Eigen::Index c = W.cols();
  V = ColMatrix::Identity(c, c);
  constexpr double tol = 1e-15;
  constexpr int max_sweeps = 80;
  Eigen::VectorXd norms(c);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < c; ++j) norms[j] = W.col(j).squaredNorm();
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < c; ++i) {
      for (Eigen::Index j = i + 1; j < c; ++j) {
        const double a = norms[i];
        const double b = norms[j];
        if (a == 0.0 || b == 0.0) continue;
        const double g = W.col(i).dot(W.col(j));
        if (std::abs(g) <= tol * std::sqrt(a * b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (auto* M : {&W, &V}) {
          auto ci = M->col(i);
          auto cj = M->col(j);
          for (Eigen::Index k = 0; k < M->rows(); ++k) {
            const double xi = ci[k];
            const double xj = cj[k];
            ci[k] = cs * xi - sn * xj;
            cj[k] = sn * xi + cs * xj;
          }
        }
        norms[i] = a - t * g;
        norms[j] = b + t * g;
      }
    }
    if (!rotated) return;
  }
}

struct FullSvd {
  ColMatrix U;
  Vector S;
  ColMatrix V;
};

FullSvd jacobi_svd(const ColMatrix& A) {
  const bool transposed = A.rows() < A.cols();
  ColMatrix W = transposed ? ColMatrix(A.transpose()) : A;
  ColMatrix V;
  hestenes(W, V);
  const Eigen::Index c = W.cols();
  std::vector<Eigen::Index> order(c);
  std::iota(order.begin(), order.end(), 0);
  Vector sv(c);
  for (Eigen::Index j = 0; j < c; ++j) sv[j] = W.col(j).norm();
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sv[x] > sv[y]; });

  FullSvd out;
  out.S.resize(c);
  out.U.resize(W.rows(), c);
  out.V.resize(c, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    const Eigen::Index src = order[j];
    out.S[j] = sv[src];
    out.V.col(j) = V.col(src);
    if (sv[src] > 0.0)
      out.U.col(j) = W.col(src) / sv[src];
    else
      out.U.col(j).setZero();
  }
  if (transposed) std::swap(out.U, out.V);
  return out;
}

}  // namespace

SvdResult truncated_svd(const ColMatrix& A, int r) {
  const Eigen::Index k = std::min(A.rows(), A.cols());
  if (r < 1 || r > k)
    throw InvalidArgument("truncated_svd: rank " + std::to_string(r) + " outside [1, " + std::to_string(k) + "]");
  if (!A.allFinite()) throw NumericalError("truncated_svd: non-finite input");
  FullSvd full = jacobi_svd(A);
  return {full.U.leftCols(r), full.S.head(r), full.V.leftCols(r)};
}

Vector singular_values(const ColMatrix& A) {
  if (A.size() == 0) return Vector();
  return jacobi_svd(A).S;
}

EigenPairs leading_eigenpairs(const ColMatrix& K, int r, ColMatrix* basis, double tol, int max_iters) {
  const Eigen::Index N = K.rows();
  if (K.cols() != N) throw DimensionError("leading_eigenpairs: matrix must be square");
  if (r < 1 || r > N) throw InvalidArgument("leading_eigenpairs: rank out of range");
  const Eigen::Index b = std::min<Eigen::Index>(N, r + 12);

  ColMatrix Q;
  if (basis && basis->rows() == N && basis->cols() == b) {
    Q = *basis;
  } else {
    // deterministic start: smooth cosines plus a unit offset
    Q.resize(N, b);
    for (Eigen::Index j = 0; j < b; ++j)
      for (Eigen::Index i = 0; i < N; ++i) Q(i, j) = std::cos(0.5 + (j + 1.0) * (i + 0.5) * 3.14159265358979 / N) + (i == j ? 1.0 : 0.0);
  }
  auto orthonormalize = [&](ColMatrix& X) {
    Eigen::HouseholderQR<ColMatrix> qr(X);
    X = qr.householderQ() * ColMatrix::Identity(N, b);
  };
  orthonormalize(Q);

  EigenPairs out;
  const double scale = std::max(K.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  for (int it = 1; it <= max_iters; ++it) {
    ColMatrix Z = K * Q;
    ColMatrix H = Q.transpose() * Z;
    H = 0.5 * (H + H.transpose()).eval();
    // H is symmetric PSD, so its SVD is its eigendecomposition
    FullSvd ritz = jacobi_svd(H);
    ColMatrix X = Q * ritz.U;
    ColMatrix KX = Z * ritz.U;
    double worst = 0.0;
    for (int i = 0; i < r; ++i) worst = std::max(worst, (KX.col(i) - ritz.S[i] * X.col(i)).norm());
    out.iterations = it;
    if (worst <= tol * std::max(ritz.S[0], scale * 1e-16) || it == max_iters) {
      out.values = ritz.S.head(r);
      out.vectors = X.leftCols(r);
      if (basis) *basis = X;
      if (worst > tol * std::max(ritz.S[0], scale * 1e-16))
        throw NumericalError("leading_eigenpairs: subspace iteration did not converge");
      return out;
    }
    Q = KX;
    orthonormalize(Q);
  }
  return out;
}

}  // namespace spod
