#pragma once

#include <vector>

#include "spod/core.hpp"

namespace spod {

/// Time-dependent shift of one frame: either nodal values p(t_k) or a
/// polynomial p(t) = sum_j c_j t^j of degree <= 10.
class PathRepr {
 public:
  enum class Kind { nodal, polynomial };

  static constexpr int kMaxDegree = 10;

  static PathRepr nodal(Vector values);
  static PathRepr polynomial(Vector coefficients);

  Kind kind() const noexcept { return kind_; }
  bool is_nodal() const noexcept { return kind_ == Kind::nodal; }
  /// Nodal values or polynomial coefficients.
  const Vector& parameters() const noexcept { return params_; }
  Vector& parameters() noexcept { return params_; }
  int dof() const noexcept { return static_cast<int>(params_.size()); }

  /// p(t_k) for every time node.
  Vector evaluate(const TimeGrid& tgrid) const;
  /// Maps dJ/dp(t_k) to dJ/dparameters (identity for nodal, Vandermonde^T otherwise).
  Vector pull_back(const Vector& nodal_gradient, const TimeGrid& tgrid) const;
  void validate(const TimeGrid& tgrid) const;

 private:
  PathRepr(Kind k, Vector p) : kind_(k), params_(std::move(p)) {}
  Kind kind_;
  Vector params_;
};

/// Modes sharing one path: row i of `modes` is phi_i (P1 coefficients),
/// column i of `coeffs` is alpha_i(t_k).
struct Frame {
  PathRepr path;
  Matrix modes;   // r x n
  Matrix coeffs;  // (m+1) x r

  int rank() const noexcept { return static_cast<int>(modes.rows()); }
};

/// Clustered ansatz z(t_k) ~ sum_rho sum_i alpha_{rho,i}(t_k) T(p_rho(t_k)) phi_{rho,i}.
struct Decomposition {
  std::vector<Frame> frames;
  SpatialGrid grid;
  TimeGrid tgrid;

  void validate() const;
  int total_modes() const;
};

}  // namespace spod
