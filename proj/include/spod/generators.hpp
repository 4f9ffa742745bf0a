#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "spod/decomposition.hpp"

namespace spod {

struct BurgersParams {
  double reynolds = 1000.0;
  int nx_intervals = 100;
  int nt_intervals = 100;
  double tfinal = 2.0;  // on the unit interval
};

/// Closed-form viscous Burgers solution
///   z(t,x) = x/(t+1) / (1 + sqrt((t+1)/exp(Re/8)) exp(Re x^2 / (4t+4)))
/// at nodes x_l = l/nx (l < nx, periodic model) and t_k = k*T/nt.
SnapshotSet burgers_analytic(const BurgersParams& p);
double burgers_value(double reynolds, double t, double x);

/// How the sixth-order difference stencil is scaled.
enum class LaplacianScaling {
  /// (1/90)[2,-27,270,-490,270,-27,2] without the 1/h^2 factor; this is the
  /// convention under which the reference wave-train data is reproduced.
  unit_spacing,
  /// (1/(90 h^2))[2,-27,270,-490,270,-27,2], the consistent second derivative.
  mesh,
};

struct FhnParams {
  double nu = 1.0;
  double a = -0.1;
  double eps = 0.05;
  double b = 0.3;
  double length = 500.0;
  double tfinal = 1000.0;
  double h = 0.5;
  double dt_out = 1.0;
  double dt_int = 0.01;
  LaplacianScaling scaling = LaplacianScaling::unit_spacing;
  /// Initial data; defaults to u = (1 + sin(pi x/50))/2, v = (1 + cos(pi x/50))/2.
  std::function<double(double)> u_init;
  std::function<double(double)> v_init;

  void validate() const;
};

/// Periodic FitzHugh-Nagumo system, sixth-order central differences in space,
/// classical RK4 in time. Returns u sampled every dt_out.
SnapshotSet fhn_simulate(const FhnParams& p);

/// One transported structure: amplitude(t) * shape(x - center - speed * t),
/// with shape evaluated on the periodic signed distance in [-L/2, L/2).
struct TravelingProfile {
  std::function<double(double)> shape;
  double center = 0.0;
  double speed = 0.0;
  std::function<double(double)> amplitude = [](double) { return 1.0; };
};

/// Data sampled exactly at the nodes, plus the generating decomposition
/// (one frame per profile, nodal path speed*t, mode = shape at t = 0).
std::pair<SnapshotSet, Decomposition> synthetic_traveling(const std::vector<TravelingProfile>& profiles,
                                                          const SpatialGrid& grid, const TimeGrid& tgrid);

std::function<double(double)> gaussian_shape(double width);
/// 1 at distance < h/2, else 0: a single-node spike.
std::function<double(double)> spike_shape(double h);

}  // namespace spod
