#include "elastoc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace elastoc {

namespace {

OptimPoint axpy(const OptimPoint& x, double s, const OptimPoint& d) {
  OptimPoint y;
  y.xi = x.xi + s * d.xi;
  y.tau = x.tau + s * d.tau;
  return y;
}

OptimPoint diff(const OptimPoint& a, const OptimPoint& b) {
  OptimPoint d;
  d.xi = a.xi - b.xi;
  d.tau = a.tau - b.tau;
  return d;
}

}  // namespace

double bb_step(const std::function<double(const OptimPoint&, const OptimPoint&)>& dot,
               const OptimPoint& dx, const OptimPoint& dg, double fallback,
               double step_min, double step_max) {
  const double num = dot(dx, dx);
  const double den = dot(dx, dg);
  if (den == 0.0 || !std::isfinite(den) ||
      std::abs(den) < 1e-30 * std::max(num, 1.0))
    return fallback;
  return std::clamp(std::abs(num / den), step_min, step_max);
}

ArmijoResult armijo_bootstrap(const OptimSurface& surface, const OptimPoint& x0,
                              double J0, const OptimPoint& direction,
                              const OptimizerConfig& config) {
  ArmijoResult out{x0, J0, 0.0, false};
  const double dir_norm = std::sqrt(surface.dot(direction, direction));
  if (dir_norm == 0.0) return out;  // already stationary

  double step = 1.0;
  for (int n = 0; n <= config.armijo_max_halvings; ++n) {
    OptimPoint x = axpy(x0, step, direction);
    if (surface.project) surface.project(x);
    std::optional<double> j;
    try {
      j = surface.value(x);
    } catch (const std::runtime_error&) {
      // solver failure at an overlong step: treat as non-improving
    }
    if (j && *j > J0) {
      out.x = std::move(x);
      out.J = *j;
      out.step = step;
      out.moved = true;
      return out;
    }
    step *= config.armijo_factor;
  }
  throw std::runtime_error(
      "armijo bootstrap found no improving step within the halving budget");
}

OptimizerReport optimize_on_surface(const OptimSurface& surface,
                                    const OptimPoint& x0,
                                    const OptimizerConfig& config) {
  config.validate();
  OptimizerReport report;

  OptimPoint x_prev = x0;
  SurfaceEval e_prev = surface.evaluate(x_prev);
  const double j_initial = e_prev.J;
  report.iterations.push_back(
      {0, e_prev.J, e_prev.norm_xi, e_prev.norm_tau, x_prev.tau, 0.0});

  auto finish = [&](const OptimPoint& x, const SurfaceEval& e,
                    std::string why) {
    report.final_point = x;
    report.J_final = e.J;
    report.grad_norm_final = e.combined_norm();
    report.termination = std::move(why);
    return report;
  };

  if (e_prev.combined_norm() <= config.stop_tol)
    return finish(x_prev, e_prev, "stationary at start");

  ArmijoResult boot =
      armijo_bootstrap(surface, x_prev, e_prev.J, e_prev.direction, config);
  OptimPoint x = boot.x;
  SurfaceEval e = surface.evaluate(x);
  double last_step = boot.moved ? boot.step : 1.0;

  OptimPoint best_x = e.J > e_prev.J ? x : x_prev;
  double best_j = std::max(e.J, e_prev.J);

  report.iterations.push_back(
      {1, e.J, e.norm_xi, e.norm_tau, x.tau, boot.step});

  int iter = 1;
  int stalled = 0;
  while (iter < config.max_iters) {
    if (e.combined_norm() <= config.stop_tol)
      return finish(x, e, "gradient below tolerance");

    const OptimPoint dx = diff(x, x_prev);
    // Secant pairing in the descent orientation of -J: dG = G_{n-1} - G_n.
    const OptimPoint dg = diff(e_prev.direction, e.direction);
    double step = bb_step(surface.dot, dx, dg, last_step, config.bb_step_min,
                          config.bb_step_max);

    std::optional<SurfaceEval> e_next;
    OptimPoint x_next;
    for (int tries = 0; tries < 50 && !e_next; ++tries) {
      x_next = axpy(x, step, e.direction);
      if (surface.project) surface.project(x_next);
      try {
        e_next = surface.evaluate(x_next);
      } catch (const std::runtime_error&) {
        step *= 0.5;  // shrink and retry on forward/adjoint failure
      }
    }
    if (!e_next)
      return finish(x, e, step <= 1e-13
                              ? "stalled at the admissibility boundary"
                              : "aborted: persistent solver failure");
    if (step <= 1e-13) {
      if (++stalled >= 3)
        return finish(x, e, "stalled at the admissibility boundary");
    } else {
      stalled = 0;
    }

    x_prev = std::move(x);
    e_prev = std::move(e);
    x = std::move(x_next);
    e = std::move(*e_next);
    last_step = step;
    ++iter;

    if (e.J > best_j) {
      best_j = e.J;
      best_x = x;
    }
    // Non-monotone safeguard: restart Armijo from the best-seen iterate when
    // BB wanders far below the starting value.
    if (e.J < j_initial - 10.0 * std::abs(j_initial) - 1e-12) {
      x = best_x;
      e = surface.evaluate(x);
      ArmijoResult restart =
          armijo_bootstrap(surface, x, e.J, e.direction, config);
      x_prev = x;
      e_prev = e;
      x = restart.x;
      e = surface.evaluate(x);
      if (restart.moved) last_step = restart.step;
    }

    report.iterations.push_back(
        {iter, e.J, e.norm_xi, e.norm_tau, x.tau, last_step});
  }
  return finish(x, e, e.combined_norm() <= config.stop_tol
                          ? "gradient below tolerance"
                          : "max iterations");
}

OptimizerReport optimize(const ControlProblem& problem,
                         const OptimizerConfig& config) {
  OptimizerConfig cfg = config;
  const TimeGrid& grid = problem.grid;
  if (cfg.tau0 == 0.0) cfg.tau0 = 0.5 * grid.T;
  if (cfg.tau_min == 0.0) cfg.tau_min = 2.0 * grid.dt;
  if (cfg.tau_max == 0.0)
    cfg.tau_max = grid.T - problem.objective.eps - 2.0 * grid.dt;

  const TriDiag m_omega = control_mass(problem.mesh, problem.space);
  int solves = 0;

  auto to_control = [](const OptimPoint& x) {
    ControlGrid c;
    c.values = x.xi;
    return c;
  };

  OptimPoint x0;
  x0.xi = Eigen::MatrixXd::Zero(problem.space.n_dofs(), grid.steps);
  x0.tau = cfg.tau0;

  double w_tau = cfg.tau_metric_weight;
  if (w_tau == 0.0) {
    const ControlGrid c = to_control(x0);
    const StateTrajectory st = problem.solve(c);
    const GradientPair g0 =
        gradient(problem, st, problem.adjoint(st, x0.tau), c, x0.tau);
    const double scale = g0.xi_norm / grid.T;
    w_tau = scale > 0.0 ? scale * scale : 1.0;
    ++solves;
  }

  OptimSurface surface;
  surface.value = [&](const OptimPoint& x) {
    const ControlGrid c = to_control(x);
    ++solves;
    return evaluate_J(problem, problem.solve(c), c, x.tau);
  };
  surface.evaluate = [&, w_tau](const OptimPoint& x) {
    const ControlGrid c = to_control(x);
    ++solves;
    const StateTrajectory st = problem.solve(c);
    const GradientPair gp =
        gradient(problem, st, problem.adjoint(st, x.tau), c, x.tau);
    SurfaceEval e;
    e.J = evaluate_J(problem, st, c, x.tau);
    e.direction.xi = gp.xi_riesz;
    e.direction.tau = gp.tau_component / w_tau;
    e.norm_xi = gp.xi_norm;
    e.norm_tau = std::abs(gp.tau_component);
    return e;
  };
  surface.dot = [&, w_tau](const OptimPoint& a, const OptimPoint& b) {
    double acc = w_tau * a.tau * b.tau;
    for (int k = 0; k < a.xi.cols(); ++k)
      acc += grid.dt * a.xi.col(k).dot(m_omega.apply(b.xi.col(k)));
    return acc;
  };
  surface.project = [&](OptimPoint& x) {
    x.tau = std::clamp(x.tau, cfg.tau_min, cfg.tau_max);
  };

  OptimizerReport report = optimize_on_surface(surface, x0, cfg);
  report.forward_solves = solves;
  return report;
}

}  // namespace elastoc
