#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "elastoc/control.hpp"
#include "elastoc/fem.hpp"

namespace elastoc {

struct ForwardOptions {
  enum class Constraint { Bordered, AugmentedLagrangian, Off };

  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  Constraint constraint = Constraint::Bordered;
  double al_rho = 1e4;        // augmented-Lagrangian penalty
  double al_tol = 1e-10;      // outer volume tolerance
  int al_max_outer = 200;
  /// Replace the strain-energy residual by its linearization at u = 0
  /// (tangent frozen at zero); used by manufactured-solution studies.
  bool linearized_at_zero = false;
};

struct StateTrajectory {
  std::vector<NodalField> u;     // steps+1 entries
  std::vector<NodalField> udot;  // steps+1 entries
  Eigen::VectorXd pressure;          // constraint multiplier trace
  Eigen::VectorXd volume_residual;   // V(u_k) - V(u_0)
  double volume_ref = 0.0;
  /// |kappa udot0'(1) + sigma(u0')(1) - g(0)|, the compatibility defect of
  /// the initial data; reported as a warning by callers, never fatal.
  double compatibility_residual = 0.0;
  int total_newton_iters = 0;
};

/// One bordered Newton correction: solves
///   [ J        border ] [du]   [-residual  ]
///   [ border^T   0    ] [dp] = [-constraint]
/// exactly via a scalar Schur complement.
struct NewtonUpdate {
  NodalField du;
  double dpressure = 0.0;
};
NewtonUpdate newton_step(const TriDiag& tangent, const NodalField& border,
                         const NodalField& residual, double constraint);

/// Crank-Nicolson (theta = 1/2) time integration of the damped state system
/// with the scalar volume constraint enforced per step; Newton on the
/// strain-energy nonlinearity. xi may be null (no control); g is the scalar
/// surface load at x = 1; extra_load, when set, returns an additional
/// assembled load covector at time t (manufactured forcing).
StateTrajectory solve_forward(
    const Mesh1D& mesh, const StrainEnergyModel& model, const TimeGrid& grid,
    double kappa, const ControlGrid* xi, const ControlSpace* space,
    OperatorKind op_kind, const std::function<double(double)>& g,
    const NodalField& u0, const NodalField& udot0,
    const ForwardOptions& opts = {},
    const std::function<NodalField(double)>& extra_load = nullptr);

/// Boundary-formula pressure of section "variational formulations":
///   p = -(1/|Gamma_N|) int (det Phi)^{-1} Phi^T (kappa du'/dn + sigma n - g);
/// in 1D this is g - kappa udot'(1) - sigma(u'(1)).
double recover_pressure_diagnostic(const Mesh1D& mesh,
                                   const StrainEnergyModel& model,
                                   double kappa, const NodalField& u,
                                   const NodalField& udot, double g = 0.0);

/// The introduction's variant normalized by the deformed boundary measure
/// |(Id+u)(Gamma_N)| = int |cof(Phi)n|; coincides with the formula above in
/// 1D where |cof(Phi)n| = 1.
double recover_pressure_deformed_measure(const Mesh1D& mesh,
                                         const StrainEnergyModel& model,
                                         double kappa, const NodalField& u,
                                         const NodalField& udot,
                                         double g = 0.0);

}  // namespace elastoc
