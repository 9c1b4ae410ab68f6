#pragma once

#include <functional>
#include <vector>

#include "elastoc/forward.hpp"
#include "elastoc/warp.hpp"

namespace elastoc {

/// Objective data: J = int c dt + phi1(tau) + phi2(T) with the running cost
/// c = -(alpha/2) |xi|^2_{L2(omega)}. phi1 evaluates the boundary-formula
/// pressure at tau (or its difference quotient over [tau, tau+eps]); phi2
/// is zero unless a terminal term is supplied.
struct ObjectiveConfig {
  enum class Phi1 { PressureAtTau, PressureDifferenceQuotient };

  double alpha = 2e-3;  // > 0
  Phi1 phi1 = Phi1::PressureAtTau;
  double eps = 0.0;        // difference-quotient window; 0 in the at-tau mode
  double eps_tilde = 0.0;  // warp reference window, eps = 0 iff eps_tilde = 0

  /// Optional terminal term phi2(u(T), udot(T)) and its derivative covectors.
  std::function<double(const NodalField&, const NodalField&)> phi2_value;
  std::function<std::pair<NodalField, NodalField>(const NodalField&,
                                                  const NodalField&)>
      phi2_derivative;

  TimeWarp warp(double T, double tau) const {
    return TimeWarp(T, tau, eps, eps_tilde);
  }
  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("objective requires alpha > 0");
    if (phi1 == Phi1::PressureDifferenceQuotient && !(eps > 0.0))
      throw std::invalid_argument("difference-quotient objective requires eps > 0");
  }
};

/// Covector pair injected into the backward sweep at one step: the discrete
/// jump [zeta]_t = M^{-1} a.
struct JumpInjection {
  int step = 0;
  NodalField a0;
  NodalField a1;
};

struct AdjointTrajectory {
  /// Below-t_k limits, the values propagated backward (jump applied).
  std::vector<NodalField> zeta0, zeta1;
  /// Above-t_k limits, the bordered-solve outputs before jump injection;
  /// these satisfy the boundary constraint exactly.
  std::vector<NodalField> zeta0_plus, zeta1_plus;
  Eigen::VectorXd pi;                   // multiplier per step interval, size steps
  Eigen::VectorXd constraint_residual;  // <zeta1_plus, cof n> per step
  double jump_time = -1.0;              // tau, or -1 when driven directly
};

/// Sensitivity covectors (a0, a1) of the boundary-formula pressure with
/// respect to (u, udot): p'_u . v = -sigma_L(u'(1)) v'(1) and
/// p'_udot . vdot = -kappa vdot'(1) in 1D.
std::pair<NodalField, NodalField> pressure_sensitivity(
    const Mesh1D& mesh, const StrainEnergyModel& model, double kappa,
    const NodalField& u, const NodalField& udot);

/// Linear split of a jump at tau in [t_i, t_{i+1}] between the two adjacent
/// steps; weights (t_{i+1}-tau)/dt at i and (tau-t_i)/dt at i+1.
struct JumpWeights {
  int step = 0;  // i
  double w_left = 1.0;
  double w_right = 0.0;
};
JumpWeights jump_interpolation(double tau, const TimeGrid& grid);

/// Core backward sweep: implicit Euler from t = T with terminal covectors
/// (b0, b1), covector injections at the given steps, the tangent frozen on
/// the forward trajectory, and the scalar boundary constraint on zeta1
/// enforced per step through the multiplier pi.
AdjointTrajectory adjoint_sweep(const Mesh1D& mesh,
                                const StrainEnergyModel& model,
                                const TimeGrid& grid, double kappa,
                                const StateTrajectory& state,
                                const std::vector<JumpInjection>& injections,
                                const NodalField& b0, const NodalField& b1);

/// Adjoint of the state system for the configured objective: assembles the
/// phi1-induced jumps at tau (and tau+eps in difference-quotient mode) from
/// the pressure sensitivities and runs the backward sweep.
AdjointTrajectory solve_adjoint(const Mesh1D& mesh,
                                const StrainEnergyModel& model,
                                const TimeGrid& grid, double kappa,
                                const StateTrajectory& state, double tau,
                                const ObjectiveConfig& objective);

}  // namespace elastoc
