#pragma once

#include <vector>

#include "elastoc/problem.hpp"

namespace elastoc {

/// Boundary-formula pressure evaluated along a trajectory; this is the
/// series phi1 acts on (the multiplier trace stays the exported pressure).
Eigen::VectorXd objective_pressure_series(const ControlProblem& problem,
                                          const StateTrajectory& state);

/// int_0^T c(xi) dt, summed exactly over the piecewise-constant lattice.
double running_cost_integral(const ControlProblem& problem,
                             const ControlGrid& xi);

/// J(xi, tau): running cost summed exactly over the piecewise-constant
/// control lattice, phi1 with the pressure series interpolated linearly at
/// tau (and tau + eps), plus the optional terminal term.
double evaluate_J(const ControlProblem& problem, const StateTrajectory& state,
                  const ControlGrid& xi, double tau);

/// J evaluated through the transformed problem: the running cost integrated
/// in the warped variable, int_0^2 mu_dot c(xi(mu(s))) ds, split at the
/// images of the time grid so the piecewise-constant data integrate exactly.
double evaluate_J_warped(const ControlProblem& problem,
                         const StateTrajectory& state, const ControlGrid& xi,
                         double tau);

/// The Hamiltonian of the optimality system at step k, all seven terms:
/// c - <zeta1, f(xi)> - <zeta1, g> - <zeta0, y1> + <grad zeta1, kappa grad y1
/// + sigma(grad y0)> + pi int det Phi(y0) + p <zeta1, cof(Phi(y0)) n>.
double hamiltonian(const ControlProblem& problem, const StateTrajectory& state,
                   const AdjointTrajectory& adjoint, const ControlGrid& xi,
                   int k);

struct GradientPair {
  Eigen::MatrixXd xi_covector;  // dual lattice values, column per step
  Eigen::MatrixXd xi_riesz;     // mass-preconditioned representative
  double tau_component = 0.0;

  double xi_norm = 0.0;  // L2(omega x (0,T)) norm of the representative
  double combined_norm() const {
    return std::sqrt(xi_norm * xi_norm + tau_component * tau_component);
  }
};

/// The two-block gradient of the optimality system: xi-block
/// c'_xi - f'(xi)* zeta1 per step, reported as covector and Riesz
/// representative; tau-block as the weighted Hamiltonian integral
/// int (mu_dot_tau / mu_dot)(mu^{-1}(t)) H(t) dt with the warp segments
/// integrated separately (midpoint sampling never hits tau or tau+eps) and
/// the volume term anchored at V_ref.
GradientPair gradient(const ControlProblem& problem,
                      const StateTrajectory& state,
                      const AdjointTrajectory& adjoint, const ControlGrid& xi,
                      double tau);

/// One row of the finite-difference verification table.
struct FdRow {
  int direction = 0;
  double h = 0.0;
  double fd = 0.0;
  double analytic = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

struct FdReport {
  std::vector<FdRow> rows;
  std::vector<double> best_rel;  // per direction
  double worst_best_rel = 0.0;
};

/// Central-difference check of the gradient in random directions over an
/// h-schedule. tau-perturbations keep the control lattice fixed, which
/// coincides with the warped-problem derivative whenever the base control is
/// constant in time (in particular at xi = 0).
FdReport fd_check(const ControlProblem& problem, const ControlGrid& xi,
                  double tau, int n_directions,
                  const std::vector<double>& h_schedule, unsigned seed = 1234);

}  // namespace elastoc
