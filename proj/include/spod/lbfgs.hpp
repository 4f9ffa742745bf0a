#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spod/core.hpp"

namespace spod {

enum class Termination { converged, max_iters, line_search_failure };

std::string to_string(Termination t);

struct LbfgsConfig {
  int max_iters = 1000;
  double grad_tol = 1e-8;  // on the infinity norm of the gradient
  int memory = 10;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  /// First trial step along the steepest-descent direction, scaled by 1/|g|_2
  /// when |g|_2 > 1. Later iterations try the unit quasi-Newton step.
  double initial_step = 1.0;
  int max_backtracks = 60;

  void validate() const;
};

/// Returns f(x) and writes the gradient into grad (already sized).
using Objective = std::function<double(const Vector& x, Vector& grad)>;
/// Called after every accepted step with (iteration, f, |g|_inf).
using ProgressFn = std::function<void(int, double, double)>;

struct LbfgsResult {
  Vector x;
  double f = 0.0;
  std::vector<double> cost_history;       // f(x0), then one entry per accepted step
  std::vector<double> grad_norm_history;  // matching |g|_inf
  int iterations = 0;
  Termination termination = Termination::max_iters;
};

/// Two-loop-recursion L-BFGS with monotone Armijo backtracking.
LbfgsResult lbfgs_minimize(const Objective& f, const Vector& x0, const LbfgsConfig& cfg,
                           const ProgressFn& progress = {});

}  // namespace spod
