#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Nothing here calls the Gram closed forms.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spod/cost.hpp"
#include "spod/optimizer.hpp"

namespace spod::testing {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

/// Distance of p to the nearest cell boundary, in units of h.
inline double cell_offset(double p, double h) {
  const double s = p / h - std::floor(p / h);
  return std::min(s, 1.0 - s);
}

struct InstanceShape {
  int n = 32;
  int m = 20;
  std::vector<int> ranks{2, 2};
  bool polynomial = false;
  int degree = 2;
};

/// Random decomposition and data on [0, L) x [0, T]. Paths stay at least
/// kink_margin*h away from cell boundaries at every time node.
inline std::pair<SnapshotSet, Decomposition> random_instance(std::mt19937_64& rng, const InstanceShape& s,
                                                             double kink_margin = 1e-3) {
  const SpatialGrid grid(s.n, 1.0);
  const TimeGrid tgrid = TimeGrid::uniform(s.m, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Decomposition d{{}, grid, tgrid};
  for (int r : s.ranks) {
    Frame f{PathRepr::nodal(Vector::Zero(s.m + 1)), random_matrix(rng, r, s.n), random_matrix(rng, s.m + 1, r)};
    if (s.polynomial) {
      // redraw until no time node lands within the margin of a kink
      for (;;) {
        PathRepr path = PathRepr::polynomial(random_vector(rng, s.degree + 1, -0.5, 0.5));
        const Vector pv = path.evaluate(tgrid);
        bool ok = true;
        for (double p : pv) ok = ok && cell_offset(p, grid.h()) > kink_margin;
        if (ok) {
          f.path = path;
          break;
        }
      }
    } else {
      Vector p(s.m + 1);
      for (auto& x : p) {
        do x = 0.8 * u(rng);
        while (cell_offset(x, grid.h()) <= kink_margin);
      }
      f.path = PathRepr::nodal(p);
    }
    d.frames.push_back(std::move(f));
  }
  Matrix z = random_matrix(rng, s.m + 1, s.n);
  return {SnapshotSet(grid, tgrid, std::move(z)), std::move(d)};
}

/// P1 periodic interpolant evaluated at arbitrary x.
inline double p1_value(const double* c, const SpatialGrid& g, double x) {
  const double L = g.length();
  double xr = std::fmod(x, L);
  if (xr < 0) xr += L;
  long cell = static_cast<long>(std::floor(xr / g.h()));
  if (cell >= g.n()) cell = g.n() - 1;
  const double t = xr / g.h() - cell;
  return (1.0 - t) * c[cell] + t * c[(cell + 1) % g.n()];
}

/// 1/2 sum_k w_k int (z_k - sum alpha T(p) phi)^2 dx by composite midpoint
/// quadrature between all kinks of all factors.
inline double residual_quadrature_cost(const SnapshotSet& z, const Decomposition& d, long panels_per_piece = 4000) {
  const SpatialGrid& g = d.grid;
  const double L = g.length();
  double total = 0.0;
  std::vector<Vector> paths;
  for (const auto& f : d.frames) paths.push_back(f.path.evaluate(d.tgrid));
  for (int k = 0; k < d.tgrid.size(); ++k) {
    std::vector<double> cuts;
    std::vector<Vector> ys;
    for (int l = 0; l < g.n(); ++l) cuts.push_back(g.node(l));
    for (std::size_t r = 0; r < d.frames.size(); ++r) {
      ys.push_back(d.frames[r].modes.transpose() * d.frames[r].coeffs.row(k).transpose());
      double pr = std::fmod(paths[r][k], L);
      if (pr < 0) pr += L;
      for (int l = 0; l < g.n(); ++l) cuts.push_back(std::fmod(g.node(l) + pr, L));
    }
    cuts.push_back(L);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      if (len <= 0) continue;
      const double dx = len / panels_per_piece;
      for (long j = 0; j < panels_per_piece; ++j) {
        const double x = cuts[i] + (j + 0.5) * dx;
        double res = p1_value(z.values.row(k).data(), g, x);
        for (std::size_t r = 0; r < d.frames.size(); ++r) res -= p1_value(ys[r].data(), g, x - paths[r][k]);
        acc += res * res * dx;
      }
    }
    total += d.tgrid.w(k) * acc;
  }
  return 0.5 * total;
}

/// Central finite differences of eval_cost with respect to every packed variable.
inline Vector fd_gradient(const SnapshotSet& z, const Decomposition& d, const VariableSet& vars, double rel_step = 1e-6) {
  Decomposition work = d;
  const Vector x0 = pack(d, vars);
  Vector g(x0.size());
  Vector x = x0;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double step = rel_step * std::max(1.0, std::abs(x0[i]));
    x[i] = x0[i] + step;
    unpack(x, work, vars);
    const double up = eval_cost(z, work);
    x[i] = x0[i] - step;
    unpack(x, work, vars);
    const double down = eval_cost(z, work);
    x[i] = x0[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// max_i |a_i - b_i| / max(|b_i|, floor). With floor 1e-4 a bound of 1e-5
/// reads as relative 1e-5 with an absolute floor of 1e-9.
inline double max_relative_deviation(const Vector& a, const Vector& b, double floor = 1e-4) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), floor));
  return worst;
}

/// Mean transport speed between snapshot rows k0 and k1: per-step circular
/// cross-correlation lags with parabolic sub-cell refinement, accumulated.
/// Lags are searched in [-max_lag, max_lag] cells so a periodic wave train
/// cannot alias onto a neighbouring crest.
inline double measured_speed(const SnapshotSet& z, int k0, int k1, int max_lag = 20) {
  const int n = z.nx();
  double cells = 0.0;
  for (int k = k0; k < k1; ++k) {
    const Vector a = z.values.row(k).transpose().array() - z.values.row(k).mean();
    const Vector b = z.values.row(k + 1).transpose().array() - z.values.row(k + 1).mean();
    auto corr = [&](int lag) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += a[l] * b[((l + lag) % n + n) % n];
      return acc;
    };
    int best = -max_lag;
    double cbest = corr(best);
    for (int lag = -max_lag + 1; lag <= max_lag; ++lag) {
      const double c = corr(lag);
      if (c > cbest) {
        cbest = c;
        best = lag;
      }
    }
    const double cm = corr(best - 1), cp = corr(best + 1);
    const double denom = cm - 2.0 * cbest + cp;
    cells += best + (denom != 0.0 ? 0.5 * (cm - cp) / denom : 0.0);
  }
  return cells * z.grid.h() / (z.tgrid.t(k1) - z.tgrid.t(k0));
}

}  // namespace spod::testing
