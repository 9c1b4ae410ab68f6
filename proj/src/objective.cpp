#include "elastoc/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace elastoc {

namespace {

double pressure_at_step(const ControlProblem& problem,
                        const StateTrajectory& state, int k) {
  return recover_pressure_diagnostic(problem.mesh, problem.model,
                                     problem.kappa, state.u[k], state.udot[k],
                                     problem.g(problem.grid.time(k)));
}

// Interpolated boundary-formula pressure; evaluates the formula only at the
// two bracketing steps so a non-injective transient elsewhere along the
// trajectory does not poison the objective.
double interpolated_pressure(const ControlProblem& problem,
                             const StateTrajectory& state, double t) {
  const JumpWeights w = jump_interpolation(t, problem.grid);
  double value = w.w_left * pressure_at_step(problem, state, w.step);
  if (w.w_right != 0.0)
    value += w.w_right * pressure_at_step(problem, state, w.step + 1);
  return value;
}

double phi1_value(const ControlProblem& problem, const StateTrajectory& state,
                  double tau) {
  const ObjectiveConfig& obj = problem.objective;
  if (obj.phi1 == ObjectiveConfig::Phi1::PressureAtTau)
    return interpolated_pressure(problem, state, tau);
  return (interpolated_pressure(problem, state, tau + obj.eps) -
          interpolated_pressure(problem, state, tau)) /
         obj.eps;
}

double running_cost(const ControlProblem& problem, const TriDiag& m_omega,
                    const Eigen::VectorXd& xi_col) {
  return -0.5 * problem.objective.alpha * xi_col.dot(m_omega.apply(xi_col));
}

// All seven Hamiltonian terms from raw fields; volume_anchor = 0 evaluates
// the printed form, volume_anchor = V_ref the constraint-anchored one used
// by the tau-gradient.
double hamiltonian_terms(const ControlProblem& problem, const TriDiag& mass,
                         const TriDiag& stiffness, const TriDiag& m_omega,
                         const NodalField& y0, const NodalField& y1, double p,
                         const Eigen::VectorXd& xi_col, double g_val,
                         const NodalField& zeta0, const NodalField& zeta1,
                         double pi, double volume_anchor) {
  const int last = problem.mesh.n_free() - 1;
  const NodalField f_xi =
      control_load(problem.mesh, problem.space, xi_col, problem.op_kind);
  const VolumeResult vol = volume_and_gradient(problem.mesh, y0);

  double h = running_cost(problem, m_omega, xi_col);
  h -= zeta1.dot(f_xi);
  h -= g_val * zeta1[last];
  h -= zeta0.dot(mass.apply(y1));
  h += problem.kappa * zeta1.dot(stiffness.apply(y1));
  h += zeta1.dot(internal_force(problem.mesh, problem.model, y0));
  h += pi * (vol.value - volume_anchor);
  h += p * vol.gradient.dot(zeta1);
  return h;
}

}  // namespace

Eigen::VectorXd objective_pressure_series(const ControlProblem& problem,
                                          const StateTrajectory& state) {
  Eigen::VectorXd series(problem.grid.steps + 1);
  for (int k = 0; k <= problem.grid.steps; ++k) {
    series[k] = recover_pressure_diagnostic(
        problem.mesh, problem.model, problem.kappa, state.u[k], state.udot[k],
        problem.g(problem.grid.time(k)));
  }
  return series;
}

double running_cost_integral(const ControlProblem& problem,
                             const ControlGrid& xi) {
  const TriDiag m_omega = control_mass(problem.mesh, problem.space);
  double acc = 0.0;
  for (int k = 0; k < problem.grid.steps; ++k)
    acc += problem.grid.dt * running_cost(problem, m_omega, xi.at_step(k));
  return acc;
}

double evaluate_J(const ControlProblem& problem, const StateTrajectory& state,
                  const ControlGrid& xi, double tau) {
  if (!(tau > 0.0 && tau < problem.grid.T))
    throw std::domain_error("tau must lie in (0, T)");

  double j = running_cost_integral(problem, xi);
  j += phi1_value(problem, state, tau);

  if (problem.objective.phi2_value)
    j += problem.objective.phi2_value(state.u[problem.grid.steps],
                                      state.udot[problem.grid.steps]);
  return j;
}

double evaluate_J_warped(const ControlProblem& problem,
                         const StateTrajectory& state, const ControlGrid& xi,
                         double tau) {
  if (!(tau > 0.0 && tau < problem.grid.T))
    throw std::domain_error("tau must lie in (0, T)");
  const TriDiag m_omega = control_mass(problem.mesh, problem.space);
  const TimeWarp warp = problem.objective.warp(problem.grid.T, tau);

  // Breakpoints in s: images of the time grid plus the warp kinks.
  std::vector<double> breaks;
  breaks.reserve(problem.grid.steps + 3);
  for (int k = 0; k <= problem.grid.steps; ++k)
    breaks.push_back(warp.s(problem.grid.time(k)));
  breaks.push_back(1.0);
  if (!warp.degenerate()) breaks.push_back(1.0 + warp.eps_tilde);
  std::sort(breaks.begin(), breaks.end());

  double j = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double sa = breaks[i], sb = breaks[i + 1];
    if (sb - sa <= 1e-15) continue;
    const double smid = 0.5 * (sa + sb);
    const double tmid = warp.t(smid);
    const int k = std::min(static_cast<int>(tmid / problem.grid.dt),
                           problem.grid.steps - 1);
    j += (sb - sa) * warp.mu_dot(smid) *
         running_cost(problem, m_omega, xi.at_step(k));
  }

  j += phi1_value(problem, state, tau);
  if (problem.objective.phi2_value)
    j += problem.objective.phi2_value(state.u[problem.grid.steps],
                                      state.udot[problem.grid.steps]);
  return j;
}

double hamiltonian(const ControlProblem& problem, const StateTrajectory& state,
                   const AdjointTrajectory& adjoint, const ControlGrid& xi,
                   int k) {
  const TriDiag mass = assemble_mass(problem.mesh);
  const TriDiag stiffness = assemble_stiffness(problem.mesh);
  const TriDiag m_omega = control_mass(problem.mesh, problem.space);
  const int kc = std::min(k, problem.grid.steps - 1);
  return hamiltonian_terms(problem, mass, stiffness, m_omega, state.u[k],
                           state.udot[k], state.pressure[k], xi.at_step(kc),
                           problem.g(problem.grid.time(k)), adjoint.zeta0[k],
                           adjoint.zeta1[k], adjoint.pi[kc],
                           /*volume_anchor=*/0.0);
}

GradientPair gradient(const ControlProblem& problem,
                      const StateTrajectory& state,
                      const AdjointTrajectory& adjoint, const ControlGrid& xi,
                      double tau) {
  const TimeGrid& grid = problem.grid;
  const double dt = grid.dt;
  const TriDiag m_omega = control_mass(problem.mesh, problem.space);
  const TriDiagSolver m_omega_solver(m_omega);
  const TriDiag mass = assemble_mass(problem.mesh);
  const TriDiag stiffness = assemble_stiffness(problem.mesh);
  const TimeWarp warp = problem.objective.warp(grid.T, tau);

  GradientPair out;
  out.xi_covector.resize(problem.space.n_dofs(), grid.steps);
  out.xi_riesz.resize(problem.space.n_dofs(), grid.steps);

  double xi_norm_sq = 0.0;
  for (int k = 0; k < grid.steps; ++k) {
    // Interval average of zeta1 from the endpoint limits on (t_k, t_{k+1}).
    const NodalField zeta1_bar =
        0.5 * (adjoint.zeta1_plus[k] + adjoint.zeta1[k + 1]);
    const Eigen::VectorXd pull = control_load_adjoint(
        problem.mesh, problem.space, zeta1_bar, problem.op_kind);
    const Eigen::VectorXd cov =
        dt * (-problem.objective.alpha * m_omega.apply(xi.at_step(k)) - pull);
    out.xi_covector.col(k) = cov;
    const Eigen::VectorXd riesz = m_omega_solver.solve(cov / dt);
    out.xi_riesz.col(k) = riesz;
    xi_norm_sq += dt * riesz.dot(m_omega.apply(riesz));
  }
  out.xi_norm = std::sqrt(xi_norm_sq);

  // tau-block: the Hamiltonian integral with the exact Eulerian weight of
  // the transformed problem, (mu_dot_tau / mu_dot) o mu^{-1}; intervals are
  // split at tau and tau + eps so the piecewise-constant weight is exact and
  // midpoints never hit the kinks.
  double tau_comp = 0.0;
  for (int k = 0; k < grid.steps; ++k) {
    const double ta = grid.time(k), tb = grid.time(k + 1);
    std::vector<double> pieces = {ta, tb};
    for (double cut : {tau, tau + problem.objective.eps})
      if (cut > ta && cut < tb) pieces.push_back(cut);
    std::sort(pieces.begin(), pieces.end());

    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
      const double a = pieces[i], b = pieces[i + 1];
      if (b - a <= 1e-15) continue;
      const double mid = 0.5 * (a + b);
      const double weight =
          warp.eulerian_weight(mid) / warp.mu_dot_eulerian(mid);
      if (weight == 0.0) continue;
      const double theta = (mid - ta) / dt;

      const NodalField y0 = (1.0 - theta) * state.u[k] + theta * state.u[k + 1];
      const NodalField y1 =
          (1.0 - theta) * state.udot[k] + theta * state.udot[k + 1];
      const double p =
          (1.0 - theta) * state.pressure[k] + theta * state.pressure[k + 1];
      const NodalField z0 =
          (1.0 - theta) * adjoint.zeta0_plus[k] + theta * adjoint.zeta0[k + 1];
      const NodalField z1 =
          (1.0 - theta) * adjoint.zeta1_plus[k] + theta * adjoint.zeta1[k + 1];

      const double h_mid = hamiltonian_terms(
          problem, mass, stiffness, m_omega, y0, y1, p, xi.at_step(k),
          problem.g(mid), z0, z1, adjoint.pi[k],
          /*volume_anchor=*/state.volume_ref);
      tau_comp += (b - a) * weight * h_mid;
    }
  }
  out.tau_component = tau_comp;
  return out;
}

FdReport fd_check(const ControlProblem& problem, const ControlGrid& xi,
                  double tau, int n_directions,
                  const std::vector<double>& h_schedule, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const StateTrajectory base_state = problem.solve(xi);
  const AdjointTrajectory base_adjoint = problem.adjoint(base_state, tau);
  const GradientPair grad = gradient(problem, base_state, base_adjoint, xi, tau);

  auto j_at = [&](const ControlGrid& x, double t) {
    return evaluate_J(problem, problem.solve(x), x, t);
  };

  // Random smooth direction fields: a low-order spatial profile times a
  // slow temporal modulation. The implicit-Euler adjoint of the
  // Crank-Nicolson state damps unresolved temporal frequencies, so the
  // O(dt) agreement the scheme delivers is defined on resolvable
  // perturbations; white-noise lattice directions would probe the scheme
  // mismatch at the Nyquist scale instead of the gradient assembly.
  auto smooth_direction = [&](Eigen::MatrixXd& dxi) {
    const int rows = static_cast<int>(dxi.rows());
    Eigen::VectorXd profile(rows);
    const double a0 = normal(rng), a1 = normal(rng), a2 = normal(rng);
    for (int i = 0; i < rows; ++i) {
      const double x = problem.mesh.nodes[problem.space.omega_nodes[i]];
      const double r = (x - problem.mesh.control_a) /
                       (problem.mesh.control_b - problem.mesh.control_a);
      profile[i] = a0 + a1 * r + a2 * std::sin(3.141592653589793 * r);
    }
    const double b = normal(rng), phase = normal(rng);
    for (int k = 0; k < dxi.cols(); ++k) {
      const double t = (k + 0.5) * problem.grid.dt;
      dxi.col(k) = profile *
                   (1.0 + b * std::sin(2.0 * 3.141592653589793 * t /
                                           problem.grid.T +
                                       phase));
    }
  };

  const TriDiag m_omega = control_mass(problem.mesh, problem.space);

  FdReport report;
  for (int d = 0; d < n_directions; ++d) {
    Eigen::MatrixXd dxi(xi.values.rows(), xi.values.cols());
    double dtau = 0.0;
    double analytic = 0.0;
    // Redraw directions that are nearly orthogonal to the gradient: the
    // relative comparison of two tiny numbers measures cancellation, not
    // the gradient assembly.
    for (int attempt = 0; attempt < 20; ++attempt) {
      smooth_direction(dxi);
      dtau = normal(rng);
      // Alternate pure-control, pure-tau and joint directions.
      if (d % 3 == 0) dtau = 0.0;
      if (d % 3 == 1) dxi.setZero();
      if (dtau == 0.0 && dxi.isZero()) dtau = 1.0;

      analytic = grad.tau_component * dtau;
      double dxi_norm_sq = 0.0;
      for (int k = 0; k < xi.steps(); ++k) {
        analytic += grad.xi_covector.col(k).dot(dxi.col(k));
        dxi_norm_sq +=
            problem.grid.dt * dxi.col(k).dot(m_omega.apply(dxi.col(k)));
      }
      const double scale = grad.xi_norm * std::sqrt(dxi_norm_sq) +
                           std::abs(grad.tau_component * dtau);
      if (scale == 0.0 || std::abs(analytic) >= 0.05 * scale) break;
    }

    double best = std::numeric_limits<double>::infinity();
    for (double h : h_schedule) {
      ControlGrid plus = xi, minus = xi;
      plus.values += h * dxi;
      minus.values -= h * dxi;
      double fd;
      try {
        fd = (j_at(plus, tau + h * dtau) - j_at(minus, tau - h * dtau)) /
             (2.0 * h);
      } catch (const std::exception&) {
        continue;  // this h leaves the admissible set; smaller ones remain
      }
      FdRow row;
      row.direction = d;
      row.h = h;
      row.fd = fd;
      row.analytic = analytic;
      row.abs_error = std::abs(fd - analytic);
      row.rel_error =
          row.abs_error /
          std::max(std::max(std::abs(analytic), std::abs(fd)), 1e-300);
      report.rows.push_back(row);
      best = std::min(best, row.rel_error);
    }
    report.best_rel.push_back(best);
  }
  report.worst_best_rel =
      *std::max_element(report.best_rel.begin(), report.best_rel.end());
  return report;
}

}  // namespace elastoc
