#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

#include "spod/error.hpp"

namespace spod {

/// Row-major so that a snapshot (one time instant) is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Uniform periodic grid on [0, L): nodes x_l = l*h, node n identified with node 0.
class SpatialGrid {
 public:
  SpatialGrid(int n, double length);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double h() const noexcept { return h_; }
  double node(int l) const noexcept { return l * h_; }

  bool operator==(const SpatialGrid& o) const noexcept {
    return n_ == o.n_ && length_ == o.length_;
  }

 private:
  int n_;
  double length_;
  double h_;
};

/// Time nodes t_0 = 0 < t_1 < ... < t_m with trapezoidal quadrature weights.
class TimeGrid {
 public:
  /// Arbitrary strictly increasing times starting at 0.
  explicit TimeGrid(std::vector<double> times);

  /// t_k = k*T/m.
  static TimeGrid uniform(int m, double tfinal);

  int m() const noexcept { return static_cast<int>(times_.size()) - 1; }
  int size() const noexcept { return static_cast<int>(times_.size()); }
  double tfinal() const noexcept { return times_.back(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double t(int k) const { return times_[k]; }
  double w(int k) const { return weights_[k]; }

  /// True when the nodes coincide with uniform(m, tfinal) to 1e-12 relative.
  bool is_uniform() const;

  bool operator==(const TimeGrid& o) const noexcept { return times_ == o.times_; }

 private:
  std::vector<double> times_;
  std::vector<double> weights_;
};

TimeGrid make_uniform_time_grid(int m, double tfinal);

/// Nodal field values: row k holds z(t_k, x_l) for l = 0..n-1. The nodal
/// values double as P1 coefficients.
struct SnapshotSet {
  SpatialGrid grid;
  TimeGrid tgrid;
  Matrix values;

  SnapshotSet(SpatialGrid g, TimeGrid tg, Matrix v);

  int nt() const noexcept { return tgrid.size(); }
  int nx() const noexcept { return grid.n(); }
};

/// Writes the `spod-v1` text format (17 significant digits).
void save_snapshots(const SnapshotSet& s, std::ostream& out);
void save_snapshots(const SnapshotSet& s, const std::string& path);
SnapshotSet load_snapshots(std::istream& in);
SnapshotSet load_snapshots(const std::string& path);

/// Periodic trapezoid in space (weight h per node), trapezoid in time.
double l2_norm_squared(const SnapshotSet& z);
double relative_l2_error(const SnapshotSet& z, const SnapshotSet& zhat);

/// CSV with header `t,x,value`, one row per (time, node).
void write_heatmap_csv(const SnapshotSet& s, std::ostream& out);

/// Formats a double with 17 significant digits (the text formats' convention).
std::string format_double(double v);

/// Strict decimal parse of a whole token; returns false on any junk or non-finite value.
bool parse_double(const std::string& token, double& out);

}  // namespace spod
