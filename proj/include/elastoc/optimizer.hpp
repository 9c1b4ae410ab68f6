#pragma once

#include <functional>
#include <string>
#include <vector>

#include "elastoc/objective.hpp"

namespace elastoc {

struct OptimizerConfig {
  double armijo_factor = 0.5;  // in (0, 1)
  int armijo_max_halvings = 60;
  double stop_tol = 1e-10;  // on the combined gradient norm
  int max_iters = 200;
  double tau_min = 0.0;  // 0 = auto: 2 dt
  double tau_max = 0.0;  // 0 = auto: T - eps - 2 dt
  double bb_step_min = 1e-6;
  double bb_step_max = 1e2;
  /// Metric weight of the tau block; 0 selects (|G0_xi| / T)^2, the
  /// relative scaling that balances the two blocks at the initial point.
  double tau_metric_weight = 0.0;
  double tau0 = 0.0;  // 0 = auto: T/2

  void validate() const {
    if (!(armijo_factor > 0.0 && armijo_factor < 1.0))
      throw std::invalid_argument("armijo_factor must lie in (0,1)");
    if (bb_step_min <= 0.0 || bb_step_max < bb_step_min)
      throw std::invalid_argument("BB step clamp must satisfy 0 < smin <= smax");
  }
};

/// Iterate of the joint (control lattice, tau) variable; also used for
/// increments and gradient representatives.
struct OptimPoint {
  Eigen::MatrixXd xi;
  double tau = 0.0;
};

/// Value and metric gradient of a maximization surface at one point. The
/// direction is the Riesz representative in the surface metric, ascent
/// oriented; the raw component norms feed the stopping rule.
struct SurfaceEval {
  double J = 0.0;
  OptimPoint direction;
  double norm_xi = 0.0;
  double norm_tau = 0.0;
  double combined_norm() const {
    return std::sqrt(norm_xi * norm_xi + norm_tau * norm_tau);
  }
};

/// Abstract maximization surface; the production problem and test surrogates
/// (a concave quadratic, for instance) both implement it.
struct OptimSurface {
  std::function<double(const OptimPoint&)> value;
  std::function<SurfaceEval(const OptimPoint&)> evaluate;
  std::function<double(const OptimPoint&, const OptimPoint&)> dot;
  std::function<void(OptimPoint&)> project = nullptr;  // e.g. tau bounds
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double grad_norm_xi = 0.0;
  double grad_tau = 0.0;
  double tau = 0.0;
  double step = 0.0;
};

struct OptimizerReport {
  std::vector<IterationRecord> iterations;
  OptimPoint final_point;
  double J_final = 0.0;
  double grad_norm_final = 0.0;
  std::string termination;
  int forward_solves = 0;
};

/// Long (BB1) Barzilai-Borwein step |<dx,dx>/<dx,dG>|, clamped; falls back
/// to `fallback` on a vanishing curvature denominator.
double bb_step(const std::function<double(const OptimPoint&, const OptimPoint&)>& dot,
               const OptimPoint& dx, const OptimPoint& dg, double fallback,
               double step_min, double step_max);

/// One Armijo bootstrap step: the smallest n such that the iterate
/// x0 + armijo_factor^n G0 improves J in the ascent orientation. Solver
/// failures along the way count as non-improving trials.
struct ArmijoResult {
  OptimPoint x;
  double J = 0.0;
  double step = 0.0;
  bool moved = false;
};
ArmijoResult armijo_bootstrap(const OptimSurface& surface, const OptimPoint& x0,
                              double J0, const OptimPoint& direction,
                              const OptimizerConfig& config);

/// Initialization, one Armijo backtracking step, then Barzilai-Borwein
/// iterations until the gradient stopping rule, with a non-monotone
/// safeguard restart and shrink-and-retry on solver failures.
OptimizerReport optimize_on_surface(const OptimSurface& surface,
                                    const OptimPoint& x0,
                                    const OptimizerConfig& config);

/// The production problem as a surface over (xi, tau) and the full run
/// started at (0, T/2).
OptimizerReport optimize(const ControlProblem& problem,
                         const OptimizerConfig& config);

}  // namespace elastoc
