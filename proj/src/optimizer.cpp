#include "spod/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace spod {

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidArgument("armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw InvalidArgument("backtrack_factor must lie in (0, 1)");
  if (!(C > 0.0)) throw InvalidArgument("penalty bound C must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("penalty coefficient lambda must be nonnegative");
  if (!variables.coeffs && !variables.paths && !variables.modes)
    throw InvalidArgument("no variables selected for optimization");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
  lbfgs().validate();
}

LbfgsConfig OptimizerConfig::lbfgs() const {
  LbfgsConfig c;
  c.max_iters = max_iters;
  c.grad_tol = grad_tol;
  c.memory = lbfgs_memory;
  c.armijo_c = armijo_c;
  c.backtrack_factor = backtrack_factor;
  c.initial_step = initial_step;
  return c;
}

int packed_size(const Decomposition& d, const VariableSet& vars) {
  int total = 0;
  for (const auto& f : d.frames) {
    if (vars.coeffs) total += static_cast<int>(f.coeffs.size());
    if (vars.paths) total += f.path.dof();
    if (vars.modes) total += static_cast<int>(f.modes.size());
  }
  return total;
}

namespace {

// Visits each selected block in pack order as (pointer-free) index ranges.
template <class CoeffFn, class PathFn, class ModeFn>
void for_each_block(const Decomposition& d, const VariableSet& vars, CoeffFn&& on_coeffs, PathFn&& on_path,
                    ModeFn&& on_modes) {
  Eigen::Index pos = 0;
  for (std::size_t r = 0; r < d.frames.size(); ++r) {
    const Frame& f = d.frames[r];
    if (vars.coeffs) {
      on_coeffs(r, pos);
      pos += f.coeffs.size();
    }
    if (vars.paths) {
      on_path(r, pos);
      pos += f.path.dof();
    }
    if (vars.modes) {
      on_modes(r, pos);
      pos += f.modes.size();
    }
  }
}

}  // namespace

Vector pack(const Decomposition& d, const VariableSet& vars) {
  Vector x(packed_size(d, vars));
  for_each_block(
      d, vars,
      [&](std::size_t r, Eigen::Index pos) {
        const Matrix& c = d.frames[r].coeffs;
        for (Eigen::Index i = 0; i < c.cols(); ++i) x.segment(pos + i * c.rows(), c.rows()) = c.col(i);
      },
      [&](std::size_t r, Eigen::Index pos) {
        x.segment(pos, d.frames[r].path.dof()) = d.frames[r].path.parameters();
      },
      [&](std::size_t r, Eigen::Index pos) {
        const Matrix& m = d.frames[r].modes;
        x.segment(pos, m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
      });
  return x;
}

void unpack(const Vector& x, Decomposition& d, const VariableSet& vars) {
  if (x.size() != packed_size(d, vars))
    throw DimensionError("unpack: vector length " + std::to_string(x.size()) + " does not match " +
                         std::to_string(packed_size(d, vars)));
  const Decomposition& cd = d;
  for_each_block(
      cd, vars,
      [&](std::size_t r, Eigen::Index pos) {
        Matrix& c = d.frames[r].coeffs;
        for (Eigen::Index i = 0; i < c.cols(); ++i) c.col(i) = x.segment(pos + i * c.rows(), c.rows());
      },
      [&](std::size_t r, Eigen::Index pos) {
        d.frames[r].path.parameters() = x.segment(pos, d.frames[r].path.dof());
      },
      [&](std::size_t r, Eigen::Index pos) {
        Matrix& m = d.frames[r].modes;
        Eigen::Map<Vector>(m.data(), m.size()) = x.segment(pos, m.size());
      });
}

Vector pack_gradient(const CostGradient& g, const Decomposition& d, const VariableSet& vars) {
  if (g.frames.size() != d.frames.size()) throw DimensionError("gradient frame count mismatch");
  Decomposition shadow = d;
  for (std::size_t r = 0; r < d.frames.size(); ++r) {
    shadow.frames[r].coeffs = g.frames[r].coeffs;
    shadow.frames[r].path.parameters() = g.frames[r].path;
    shadow.frames[r].modes = g.frames[r].modes;
  }
  return pack(shadow, vars);
}

Decomposition initial_decomposition(const SnapshotSet& z, const std::vector<FrameInit>& frames) {
  if (frames.empty()) throw InvalidArgument("at least one frame is required");
  Decomposition d{{}, z.grid, z.tgrid};
  for (const auto& fi : frames) {
    if (fi.rank < 1 || fi.rank > z.nt())
      throw InvalidArgument("frame rank " + std::to_string(fi.rank) + " exceeds the number of snapshots");
    Matrix modes = Matrix::Zero(fi.rank, z.nx());
    if (fi.modes == ModeInit::first_snapshots)
      modes = z.values.topRows(fi.rank);
    else
      modes.row(0) = z.values.row(0);
    d.frames.push_back(Frame{fi.path, std::move(modes), Matrix::Ones(z.nt(), fi.rank)});
  }
  d.validate();
  return d;
}

PathRepr linear_path(const TimeGrid& tgrid, double slope, double intercept) {
  Vector p(tgrid.size());
  for (int k = 0; k < tgrid.size(); ++k) p[k] = slope * tgrid.t(k) + intercept;
  return PathRepr::nodal(std::move(p));
}

OptimizerResult optimize_decomposition(const SnapshotSet& z, const Decomposition& d0, const OptimizerConfig& cfg,
                                       const ProgressFn& progress) {
  cfg.validate();
  if (!(z.grid == d0.grid) || !(z.tgrid == d0.tgrid)) throw DimensionError("initial decomposition grids differ from data");
  d0.validate();
  const VariableSet vars = cfg.variables;
  const EvalOptions eopt{cfg.threads};
  Decomposition work = d0;

  auto objective = [&](const Vector& x, Vector& grad) {
    unpack(x, work, vars);
    const CostGradient cg = eval_cost_gradient(z, work, eopt);
    grad = pack_gradient(cg, work, vars);
    double value = cg.value;
    if (cfg.lambda > 0.0) {
      // the penalty is a max of norms; central differences give a subgradient
      value += cfg.lambda * penalty_value(work, cfg.C);
      Decomposition probe = work;
      Vector xp = x;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = 1e-7 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        unpack(xp, probe, vars);
        const double up = penalty_value(probe, cfg.C);
        xp[i] = x[i] - step;
        unpack(xp, probe, vars);
        const double down = penalty_value(probe, cfg.C);
        xp[i] = x[i];
        grad[i] += cfg.lambda * (up - down) / (2.0 * step);
      }
    }
    return value;
  };

  const LbfgsResult lr = lbfgs_minimize(objective, pack(d0, vars), cfg.lbfgs(), progress);
  OptimizerResult out{d0, lr.cost_history, lr.grad_norm_history, lr.iterations, lr.termination};
  unpack(lr.x, out.decomposition, vars);
  return out;
}

}  // namespace spod
