#include "spod/cost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "spod/shift_fem.hpp"

namespace spod {

namespace {

void check_compatible(const SnapshotSet& z, const Decomposition& d) {
  if (!(z.grid == d.grid)) throw DimensionError("snapshot and decomposition spatial grids differ");
  if (!(z.tgrid == d.tgrid)) throw DimensionError("snapshot and decomposition time grids differ");
  d.validate();
}

// Runs body(chunk, k_begin, k_end) over contiguous chunks of [0, nt).
template <class Body>
void for_time_chunks(int nt, int threads, Body&& body) {
  const int chunks = std::clamp(threads, 1, std::max(1, nt));
  if (chunks == 1) {
    body(0, 0, nt);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (int c = 0; c < chunks; ++c) {
    const int k0 = static_cast<int>(static_cast<long>(nt) * c / chunks);
    const int k1 = static_cast<int>(static_cast<long>(nt) * (c + 1) / chunks);
    pool.emplace_back([&, c, k0, k1] { body(c, k0, k1); });
  }
  for (auto& t : pool) t.join();
}

// Circulant matrix with diagonals k-2..k+2: (A x)_k = sum_j c[j] x_{k+j-2}.
struct Band5 {
  std::array<double, 5> c{};

  void apply(const Vector& x, Vector& out) const {
    const int n = static_cast<int>(x.size());
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 5; ++j) acc += c[j] * x[((k + j - 2) % n + n) % n];
      out[k] = acc;
    }
  }
  void apply_transpose(const Vector& x, Vector& out) const {
    const int n = static_cast<int>(x.size());
    out.setZero();
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < 5; ++j) out[((k + j - 2) % n + n) % n] += c[j] * x[k];
  }
  Band5 transposed() const { return {{c[4], c[3], c[2], c[1], c[0]}}; }
  Band5 operator-(const Band5& o) const {
    Band5 r;
    for (int j = 0; j < 5; ++j) r.c[j] = c[j] - o.c[j];
    return r;
  }
};

// F(theta h) - F(0) for |theta| <= 1, written without a constant term so the
// entries carry relative accuracy in theta.
Band5 mass_increment(double theta, double h) {
  const double t = std::abs(theta), t2 = t * t, t3 = t2 * t;
  const Band5 b{{h * t3 / 6.0, h * (0.5 * t + 0.5 * t2 - 0.5 * t3), h * (0.5 * t3 - t2),
                 h * (0.5 * t2 - 0.5 * t - t3 / 6.0), 0.0}};
  return theta >= 0.0 ? b : b.transposed();
}

// G(theta h) - G(0), same convention.
Band5 derivative_increment(double theta) {
  const double t = std::abs(theta), t2 = t * t;
  const Band5 b{{0.5 * t2, t - 1.5 * t2, 1.5 * t2 - 2.0 * t, t - 0.5 * t2, 0.0}};
  if (theta >= 0.0) return b;
  Band5 r = b.transposed();
  for (auto& v : r.c) v = -v;
  return r;
}

Band5 mass_at_zero(double h) { return {{0.0, h / 6.0, 2.0 * h / 3.0, h / 6.0, 0.0}}; }
Band5 derivative_at_zero() { return {{0.0, 0.5, 0.0, -0.5, 0.0}}; }

// Per-time-step scratch shared by cost and gradient. Each frame shift is split
// as p = q h + theta h with q the nearest whole cell; whole-cell shifts are
// exact index rotations, so v = z - sum rotated modes is formed nodally and
// only theta-sized Gram increments enter the rest of the expansion.
struct StepWork {
  int n;
  std::vector<Vector> y;     // combined mode sum_i alpha_i phi_i per frame
  std::vector<Vector> yq;    // y rotated by its whole-cell shift
  std::vector<int> q;
  std::vector<double> theta;
  Vector v;
  Vector tmp;
  Vector tmp2;

  StepWork(int n_, std::size_t frames)
      : n(n_), y(frames, Vector(n_)), yq(frames, Vector(n_)), q(frames, 0), theta(frames, 0.0), v(n_), tmp(n_),
        tmp2(n_) {}
};

void rotate(const Vector& x, int q, Vector& out) {
  const int n = static_cast<int>(x.size());
  for (int l = 0; l < n; ++l) out[(l + q) % n] = x[l];
}

void prepare_step(const double* z, const std::vector<double>& p, const SpatialGrid& grid, StepWork& w) {
  w.v = Eigen::Map<const Vector>(z, w.n);
  for (std::size_t r = 0; r < w.y.size(); ++r) {
    const auto [q, frac] = decompose_shift(p[r], grid);
    if (frac > 0.5 * grid.h()) {
      w.q[r] = (q + 1) % w.n;
      w.theta[r] = (frac - grid.h()) / grid.h();
    } else {
      w.q[r] = q;
      w.theta[r] = frac / grid.h();
    }
    rotate(w.y[r], w.q[r], w.yq[r]);
    w.v -= w.yq[r];
  }
}

// E_k = v^T F(0) v - 2 sum_r v^T D(theta_r) yq_r
//       + sum_{r,s} yq_r^T [D(theta_s - theta_r) - D(-theta_r) - D(theta_s)] yq_s
// with D the mass increment; the bracket is <T(p_r) y_r - yq_r, T(p_s) y_s - yq_s>.
double step_energy(const SpatialGrid& grid, StepWork& w) {
  const double h = grid.h();
  mass_at_zero(h).apply(w.v, w.tmp);
  double e = w.v.dot(w.tmp);
  const std::size_t nf = w.y.size();
  for (std::size_t r = 0; r < nf; ++r) {
    if (w.theta[r] == 0.0) continue;
    mass_increment(w.theta[r], h).apply(w.yq[r], w.tmp);
    e -= 2.0 * w.v.dot(w.tmp);
  }
  for (std::size_t r = 0; r < nf; ++r) {
    for (std::size_t s = 0; s < nf; ++s) {
      if (w.theta[r] == 0.0 && w.theta[s] == 0.0) continue;
      const Band5 k = mass_increment(w.theta[s] - w.theta[r], h) - mass_increment(-w.theta[r], h) -
                      mass_increment(w.theta[s], h);
      k.apply(w.yq[s], w.tmp);
      e += w.yq[r].dot(w.tmp);
    }
  }
  return e;
}

std::vector<Vector> evaluate_paths(const Decomposition& d) {
  std::vector<Vector> paths;
  paths.reserve(d.frames.size());
  for (const auto& f : d.frames) paths.push_back(f.path.evaluate(d.tgrid));
  return paths;
}

void combine_modes(const Decomposition& d, int k, StepWork& w) {
  for (std::size_t r = 0; r < d.frames.size(); ++r)
    w.y[r].noalias() = d.frames[r].modes.transpose() * d.frames[r].coeffs.row(k).transpose();
}

}  // namespace

SnapshotSet reconstruct(const Decomposition& d) {
  d.validate();
  const int nt = d.tgrid.size();
  const int n = d.grid.n();
  Matrix out = Matrix::Zero(nt, n);
  const auto paths = evaluate_paths(d);
  Vector y(n), shifted(n);
  for (int k = 0; k < nt; ++k) {
    for (std::size_t r = 0; r < d.frames.size(); ++r) {
      const Frame& f = d.frames[r];
      y.noalias() = f.modes.transpose() * f.coeffs.row(k).transpose();
      shift_field(paths[r][k], y.data(), shifted.data(), d.grid);
      out.row(k) += shifted.transpose();
    }
  }
  return SnapshotSet(d.grid, d.tgrid, std::move(out));
}

double eval_cost(const SnapshotSet& z, const Decomposition& d, const EvalOptions& opt) {
  check_compatible(z, d);
  const int nt = d.tgrid.size();
  const auto paths = evaluate_paths(d);
  const int chunks = std::clamp(opt.threads, 1, std::max(1, nt));
  std::vector<double> partial(chunks, 0.0);
  for_time_chunks(nt, chunks, [&](int c, int k0, int k1) {
    StepWork w(d.grid.n(), d.frames.size());
    std::vector<double> p(d.frames.size());
    double acc = 0.0;
    for (int k = k0; k < k1; ++k) {
      combine_modes(d, k, w);
      for (std::size_t r = 0; r < p.size(); ++r) p[r] = paths[r][k];
      prepare_step(z.values.row(k).data(), p, d.grid, w);
      acc += d.tgrid.w(k) * step_energy(d.grid, w);
    }
    partial[c] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return 0.5 * total;
}

CostGradient eval_cost_gradient(const SnapshotSet& z, const Decomposition& d, const EvalOptions& opt) {
  check_compatible(z, d);
  const int nt = d.tgrid.size();
  const int n = d.grid.n();
  const std::size_t nf = d.frames.size();
  const auto paths = evaluate_paths(d);

  std::vector<Matrix> g_coeffs(nf);
  std::vector<Vector> g_nodal(nf, Vector::Zero(nt));
  for (std::size_t r = 0; r < nf; ++r) g_coeffs[r] = Matrix::Zero(nt, d.frames[r].rank());

  const int chunks = std::clamp(opt.threads, 1, std::max(1, nt));
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::vector<Matrix>> partial_modes(chunks);

  for_time_chunks(nt, chunks, [&](int c, int k0, int k1) {
    StepWork w(n, nf);
    std::vector<double> p(nf);
    std::vector<Matrix> gm(nf);
    for (std::size_t r = 0; r < nf; ++r) gm[r] = Matrix::Zero(d.frames[r].rank(), n);
    Vector R(n), S(n);
    double acc = 0.0;
    for (int k = k0; k < k1; ++k) {
      const double wk = d.tgrid.w(k);
      const double* zk = z.values.row(k).data();
      combine_modes(d, k, w);
      for (std::size_t r = 0; r < nf; ++r) p[r] = paths[r][k];
      prepare_step(zk, p, d.grid, w);
      acc += wk * step_energy(d.grid, w);

      for (std::size_t r = 0; r < nf; ++r) {
        // R_l = <g - z, T(p_r) psi_l>, S_l = <g - z, d/dp T(p_r) psi_l>, first
        // indexed by l + q_r, then rotated back
        //   R = -(F(0) + D(theta_r))^T v + sum_s [D(theta_r - theta_s) - D(theta_r)]^T yq_s
        //   S = -(G(0) + H(theta_r))^T v + sum_s [H(theta_r - theta_s) - H(theta_r)]^T yq_s
        const double h = d.grid.h();
        const Band5 dr = mass_increment(w.theta[r], h);
        const Band5 hr = derivative_increment(w.theta[r]);
        Band5 f0 = mass_at_zero(h), g0 = derivative_at_zero();
        for (int j = 0; j < 5; ++j) {
          f0.c[j] = -(f0.c[j] + dr.c[j]);
          g0.c[j] = -(g0.c[j] + hr.c[j]);
        }
        f0.apply_transpose(w.v, w.tmp);
        g0.apply_transpose(w.v, w.tmp2);
        for (std::size_t s = 0; s < nf; ++s) {
          const Band5 a = mass_increment(w.theta[r] - w.theta[s], h) - dr;
          const Band5 b = derivative_increment(w.theta[r] - w.theta[s]) - hr;
          a.apply_transpose(w.yq[s], R);
          w.tmp += R;
          b.apply_transpose(w.yq[s], S);
          w.tmp2 += S;
        }
        const int qr = w.q[r];
        for (int l = 0; l < n; ++l) {
          R[l] = w.tmp[(l + qr) % n];
          S[l] = w.tmp2[(l + qr) % n];
        }
        const Frame& f = d.frames[r];
        g_coeffs[r].row(k).noalias() = wk * (f.modes * R).transpose();
        g_nodal[r][k] = wk * S.dot(w.y[r]);
        gm[r].noalias() += (wk * f.coeffs.row(k).transpose()) * R.transpose();
      }
    }
    partial[c] = acc;
    partial_modes[c] = std::move(gm);
  });

  CostGradient out;
  double total = 0.0;
  for (double v : partial) total += v;
  out.value = 0.5 * total;
  out.frames.resize(nf);
  for (std::size_t r = 0; r < nf; ++r) {
    Matrix gm = partial_modes[0][r];
    for (int c = 1; c < chunks; ++c) gm += partial_modes[c][r];
    out.frames[r].coeffs = std::move(g_coeffs[r]);
    out.frames[r].path = d.frames[r].path.pull_back(g_nodal[r], d.tgrid);
    out.frames[r].modes = std::move(gm);
  }
  return out;
}

double coeff_norm(const Vector& alpha, const TimeGrid& tgrid) {
  double acc = 0.0;
  for (int k = 0; k < tgrid.size(); ++k) acc += tgrid.w(k) * alpha[k] * alpha[k];
  return std::sqrt(acc);
}

double path_h1_norm(const Vector& p, const TimeGrid& tgrid) {
  const int m = tgrid.m();
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) {
    const int lo = k == 0 ? 0 : k - 1;
    const int hi = k == m ? m : k + 1;
    const double dp = (p[hi] - p[lo]) / (tgrid.t(hi) - tgrid.t(lo));
    acc += tgrid.w(k) * (p[k] * p[k] + dp * dp);
  }
  return std::sqrt(acc);
}

double mode_h1_norm(const Vector& phi, const SpatialGrid& grid) {
  const Vector mphi = apply_gram(gram_F(0.0, grid), phi);
  const Vector kphi = apply_gram(stiffness_gram(grid), phi);
  return std::sqrt(std::max(0.0, phi.dot(mphi) + phi.dot(kphi)));
}

std::vector<PairNorms> pair_norms(const Decomposition& d) {
  d.validate();
  std::vector<PairNorms> out;
  for (const auto& f : d.frames) {
    const double pn = path_h1_norm(f.path.evaluate(d.tgrid), d.tgrid);
    for (int i = 0; i < f.rank(); ++i)
      out.push_back({coeff_norm(f.coeffs.col(i), d.tgrid), pn, mode_h1_norm(f.modes.row(i).transpose(), d.grid)});
  }
  return out;
}

double penalty_value(const Decomposition& d, double C) {
  if (!(C > 0.0)) throw InvalidArgument("penalty bound C must be positive");
  double total = 0.0;
  for (const auto& pn : pair_norms(d)) total += std::max(0.0, std::max({pn.coeff, pn.path, pn.mode}) - C);
  return total;
}

bool is_admissible(const Decomposition& d, double C) {
  if (!(C > 0.0)) throw InvalidArgument("penalty bound C must be positive");
  for (const auto& pn : pair_norms(d))
    if (pn.coeff > C || pn.path > C || pn.mode > C) return false;
  return true;
}

double eval_penalized_cost(const SnapshotSet& z, const Decomposition& d, double C, double lambda,
                           const EvalOptions& opt) {
  if (!(lambda >= 0.0)) throw InvalidArgument("penalty coefficient lambda must be nonnegative");
  if (!(C > 0.0)) throw InvalidArgument("penalty bound C must be positive");
  const double j = eval_cost(z, d, opt);
  return lambda == 0.0 ? j : j + lambda * penalty_value(d, C);
}

}  // namespace spod
