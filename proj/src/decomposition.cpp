#include "spod/decomposition.hpp"

#include <cmath>

namespace spod {

PathRepr PathRepr::nodal(Vector values) { return PathRepr(Kind::nodal, std::move(values)); }

PathRepr PathRepr::polynomial(Vector coefficients) {
  if (coefficients.size() < 1 || coefficients.size() > kMaxDegree + 1)
    throw InvalidArgument("polynomial path degree must be between 0 and " + std::to_string(kMaxDegree));
  return PathRepr(Kind::polynomial, std::move(coefficients));
}

Vector PathRepr::evaluate(const TimeGrid& tgrid) const {
  if (kind_ == Kind::nodal) {
    if (params_.size() != tgrid.size()) throw DimensionError("nodal path length does not match time grid");
    return params_;
  }
  Vector out(tgrid.size());
  for (int k = 0; k < tgrid.size(); ++k) {
    const double t = tgrid.t(k);
    double acc = 0.0;
    for (Eigen::Index j = params_.size() - 1; j >= 0; --j) acc = acc * t + params_[j];
    out[k] = acc;
  }
  return out;
}

Vector PathRepr::pull_back(const Vector& g, const TimeGrid& tgrid) const {
  if (g.size() != tgrid.size()) throw DimensionError("path gradient length does not match time grid");
  if (kind_ == Kind::nodal) return g;
  Vector out = Vector::Zero(params_.size());
  for (int k = 0; k < tgrid.size(); ++k) {
    double tp = 1.0;
    for (Eigen::Index j = 0; j < params_.size(); ++j) {
      out[j] += g[k] * tp;
      tp *= tgrid.t(k);
    }
  }
  return out;
}

void PathRepr::validate(const TimeGrid& tgrid) const {
  if (kind_ == Kind::nodal && params_.size() != tgrid.size())
    throw DimensionError("nodal path has " + std::to_string(params_.size()) + " values, time grid has " +
                         std::to_string(tgrid.size()));
  if (kind_ == Kind::polynomial && (params_.size() < 1 || params_.size() > kMaxDegree + 1))
    throw InvalidArgument("polynomial path degree out of range");
  if (!params_.allFinite()) throw NumericalError("path parameters must be finite");
}

void Decomposition::validate() const {
  if (frames.empty()) throw InvalidArgument("decomposition needs at least one frame");
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const Frame& fr = frames[f];
    const std::string tag = "frame " + std::to_string(f) + ": ";
    if (fr.rank() < 1) throw InvalidArgument(tag + "needs at least one mode");
    if (fr.modes.cols() != grid.n()) throw DimensionError(tag + "mode length does not match grid");
    if (fr.coeffs.rows() != tgrid.size() || fr.coeffs.cols() != fr.rank())
      throw DimensionError(tag + "coefficient matrix must be (m+1) x r");
    if (!fr.modes.allFinite() || !fr.coeffs.allFinite()) throw NumericalError(tag + "non-finite entries");
    fr.path.validate(tgrid);
  }
}

int Decomposition::total_modes() const {
  int r = 0;
  for (const auto& f : frames) r += f.rank();
  return r;
}

}  // namespace spod
