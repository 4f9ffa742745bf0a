#include "spod/generators.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace spod {

double burgers_value(double re, double t, double x) {
  // sqrt((t+1)/exp(Re/8)) exp(Re x^2/(4t+4)) folded into one exponent
  const double expo = 0.5 * std::log(t + 1.0) - re / 16.0 + re * x * x / (4.0 * t + 4.0);
  return x / (t + 1.0) / (1.0 + std::exp(expo));
}

SnapshotSet burgers_analytic(const BurgersParams& p) {
  if (!(p.reynolds > 0.0)) throw InvalidArgument("Reynolds number must be positive");
  if (p.nx_intervals < 3 || p.nt_intervals < 2) throw InvalidArgument("Burgers grid needs nx >= 3 and nt >= 2 intervals");
  SpatialGrid grid(p.nx_intervals, 1.0);
  TimeGrid tgrid = TimeGrid::uniform(p.nt_intervals, p.tfinal);
  Matrix z(tgrid.size(), grid.n());
  for (int k = 0; k < tgrid.size(); ++k)
    for (int l = 0; l < grid.n(); ++l) z(k, l) = burgers_value(p.reynolds, tgrid.t(k), grid.node(l));
  return SnapshotSet(grid, tgrid, std::move(z));
}

void FhnParams::validate() const {
  if (!(length > 0.0) || !(tfinal > 0.0) || !(h > 0.0) || !(dt_out > 0.0) || !(dt_int > 0.0))
    throw InvalidArgument("FitzHugh-Nagumo lengths, times and steps must be positive");
  if (!(nu >= 0.0)) throw InvalidArgument("diffusion coefficient must be nonnegative");
  const double cells = length / h;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells || std::round(cells) < 7)
    throw InvalidArgument("length / h must be an integer of at least 7");
  const double outs = tfinal / dt_out;
  if (std::abs(outs - std::round(outs)) > 1e-9 * outs)
    throw InvalidArgument("tfinal / dt_out must be an integer");
  const double sub = dt_out / dt_int;
  if (std::abs(sub - std::round(sub)) > 1e-9 * sub)
    throw InvalidArgument("dt_out / dt_int must be an integer");
}

SnapshotSet fhn_simulate(const FhnParams& p) {
  p.validate();
  const int n = static_cast<int>(std::lround(p.length / p.h));
  const int nout = static_cast<int>(std::lround(p.tfinal / p.dt_out));
  const int substeps = static_cast<int>(std::lround(p.dt_out / p.dt_int));
  const double dt = p.dt_out / substeps;
  SpatialGrid grid(n, p.length);

  const auto u0 = p.u_init ? p.u_init : [](double x) { return 0.5 * (1.0 + std::sin(std::numbers::pi * x / 50.0)); };
  const auto v0 = p.v_init ? p.v_init : [](double x) { return 0.5 * (1.0 + std::cos(std::numbers::pi * x / 50.0)); };

  const double scale = p.nu / 90.0 / (p.scaling == LaplacianScaling::mesh ? p.h * p.h : 1.0);
  const std::array<double, 7> stencil{2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};

  Vector u(n), v(n);
  for (int l = 0; l < n; ++l) {
    u[l] = u0(grid.node(l));
    v[l] = v0(grid.node(l));
  }

  auto rhs = [&](const Vector& uu, const Vector& vv, Vector& du, Vector& dv) {
    for (int l = 0; l < n; ++l) {
      double lap = 0.0;
      for (int j = 0; j < 7; ++j) {
        int idx = l + j - 3;
        if (idx < 0) idx += n;
        else if (idx >= n) idx -= n;
        lap += stencil[j] * uu[idx];
      }
      const double ul = uu[l];
      du[l] = scale * lap - vv[l] + ul * (1.0 - ul) * (ul - p.a);
      dv[l] = p.eps * (p.b * ul - vv[l]);
    }
  };

  Matrix out(nout + 1, n);
  out.row(0) = u.transpose();
  Vector k1u(n), k1v(n), k2u(n), k2v(n), k3u(n), k3v(n), k4u(n), k4v(n), tu(n), tv(n);
  for (int s = 1; s <= nout; ++s) {
    for (int j = 0; j < substeps; ++j) {
      rhs(u, v, k1u, k1v);
      tu = u + 0.5 * dt * k1u;
      tv = v + 0.5 * dt * k1v;
      rhs(tu, tv, k2u, k2v);
      tu = u + 0.5 * dt * k2u;
      tv = v + 0.5 * dt * k2v;
      rhs(tu, tv, k3u, k3v);
      tu = u + dt * k3u;
      tv = v + dt * k3v;
      rhs(tu, tv, k4u, k4v);
      u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e3)
      throw NumericalError("FitzHugh-Nagumo integration blew up at t = " + std::to_string(s * p.dt_out) +
                           "; reduce dt_int");
    out.row(s) = u.transpose();
  }
  return SnapshotSet(grid, TimeGrid::uniform(nout, p.tfinal), std::move(out));
}

std::pair<SnapshotSet, Decomposition> synthetic_traveling(const std::vector<TravelingProfile>& profiles,
                                                          const SpatialGrid& grid, const TimeGrid& tgrid) {
  if (profiles.empty()) throw InvalidArgument("synthetic_traveling needs at least one profile");
  const double L = grid.length();
  auto signed_dist = [L](double d) {
    double r = std::fmod(d + 0.5 * L, L);
    if (r < 0) r += L;
    return r - 0.5 * L;
  };
  const int nt = tgrid.size();
  const int n = grid.n();
  Matrix z = Matrix::Zero(nt, n);
  Decomposition truth{{}, grid, tgrid};
  for (const auto& pr : profiles) {
    Matrix mode(1, n);
    Matrix coeffs(nt, 1);
    Vector path(nt);
    for (int l = 0; l < n; ++l) mode(0, l) = pr.shape(signed_dist(grid.node(l) - pr.center));
    for (int k = 0; k < nt; ++k) {
      const double t = tgrid.t(k);
      const double amp = pr.amplitude(t);
      coeffs(k, 0) = amp;
      path[k] = pr.speed * t;
      for (int l = 0; l < n; ++l) z(k, l) += amp * pr.shape(signed_dist(grid.node(l) - pr.center - path[k]));
    }
    truth.frames.push_back(Frame{PathRepr::nodal(std::move(path)), std::move(mode), std::move(coeffs)});
  }
  return {SnapshotSet(grid, tgrid, std::move(z)), std::move(truth)};
}

std::function<double(double)> gaussian_shape(double width) {
  return [width](double d) { return std::exp(-0.5 * d * d / (width * width)); };
}

std::function<double(double)> spike_shape(double h) {
  return [h](double d) { return std::abs(d) < 0.5 * h ? 1.0 : 0.0; };
}

}  // namespace spod
