#include "spod/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace spod {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max-iters";
    case Termination::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

void LbfgsConfig::validate() const {
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(grad_tol >= 0.0)) throw InvalidArgument("grad_tol must be nonnegative");
  if (memory < 1) throw InvalidArgument("L-BFGS memory must be at least 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidArgument("armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw InvalidArgument("backtrack_factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) throw InvalidArgument("initial_step must be positive");
  if (max_backtracks < 1) throw InvalidArgument("max_backtracks must be positive");
}

namespace {

struct Pair {
  Vector s;
  Vector y;
  double rho;
};

// H*g by the two-loop recursion, H0 = gamma*I.
Vector two_loop(const std::deque<Pair>& mem, const Vector& g) {
  Vector q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  const Pair& last = mem.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, const Vector& x0, const LbfgsConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  LbfgsResult res;
  res.x = x0;
  Vector g(x0.size());
  res.f = f(res.x, g);
  if (!std::isfinite(res.f) || !g.allFinite()) throw NumericalError("objective is not finite at the starting point");

  auto inf_norm = [](const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };
  double gnorm = inf_norm(g);
  res.cost_history.push_back(res.f);
  res.grad_norm_history.push_back(gnorm);

  std::deque<Pair> mem;
  Vector x_new(x0.size()), g_new(x0.size());
  for (int it = 0;; ++it) {
    if (gnorm <= cfg.grad_tol) {
      res.termination = Termination::converged;
      break;
    }
    if (it >= cfg.max_iters) {
      res.termination = Termination::max_iters;
      break;
    }

    Vector d;
    double step = 1.0;
    if (!mem.empty()) d = -two_loop(mem, g);
    if (mem.empty() || !(g.dot(d) < 0.0)) {
      mem.clear();
      d = -g;
      const double g2 = g.norm();
      step = cfg.initial_step / std::max(1.0, g2);
    }
    const double slope = g.dot(d);

    bool accepted = false;
    double f_new = 0.0;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      x_new = res.x + step * d;
      f_new = f(x_new, g_new);
      // once f is flat to rounding, the gradient norm has to drop instead
      if (std::isfinite(f_new) && g_new.allFinite() && f_new <= res.f + cfg.armijo_c * step * slope &&
          (f_new < res.f || g_new.norm() < g.norm())) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!accepted) {
      res.termination = Termination::line_search_failure;
      break;
    }

    Vector s = x_new - res.x;
    Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(mem.size()) == cfg.memory) mem.pop_front();
      mem.push_back({std::move(s), std::move(y), 1.0 / sy});
    }
    res.x.swap(x_new);
    g.swap(g_new);
    res.f = f_new;
    gnorm = inf_norm(g);
    res.iterations = it + 1;
    res.cost_history.push_back(res.f);
    res.grad_norm_history.push_back(gnorm);
    if (progress) progress(res.iterations, res.f, gnorm);
  }
  return res;
}

}  // namespace spod
