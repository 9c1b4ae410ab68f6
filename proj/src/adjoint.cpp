#include "elastoc/adjoint.hpp"

#include <algorithm>
#include <cmath>

namespace elastoc {

std::pair<NodalField, NodalField> pressure_sensitivity(
    const Mesh1D& mesh, const StrainEnergyModel& model, double kappa,
    const NodalField& u, const NodalField& udot) {
  (void)udot;  // the 1D sensitivities depend on u only
  const int n = mesh.n_free();
  const int e_last = mesh.n_elements() - 1;
  const double h = mesh.element_length(e_last);
  const double du = element_gradient(mesh, u, e_last);
  if (1.0 + du <= 0.0) throw std::runtime_error("non-injective deformation");

  const ScalarEnergy se = scalar_energy(model, du + 0.5 * du * du);
  const double sigma_l = se.S + (1.0 + du) * (1.0 + du) * se.D2;

  // v'(1) as a covector on the free dofs: (e_N - e_{N-1}) / h.
  NodalField dgrad = NodalField::Zero(n);
  dgrad[n - 1] = 1.0 / h;
  if (n >= 2) dgrad[n - 2] = -1.0 / h;

  // p'_u . v = -sigma_L(u'(1)) v'(1); the sigma_N-type term vanishes in 1D.
  // p'_udot . vdot = -kappa vdot'(1).
  return {-sigma_l * dgrad, -kappa * dgrad};
}

JumpWeights jump_interpolation(double tau, const TimeGrid& grid) {
  if (tau < 0.0 || tau > grid.T)
    throw std::domain_error("jump time outside [0, T]");
  int i = static_cast<int>(std::floor(tau / grid.dt));
  i = std::clamp(i, 0, grid.steps - 1);
  JumpWeights w;
  w.step = i;
  w.w_right = (tau - grid.time(i)) / grid.dt;
  w.w_left = 1.0 - w.w_right;
  // Snap grid-aligned times so the whole jump lands on one step.
  constexpr double snap = 1e-9;
  if (w.w_right <= snap) {
    w.w_left = 1.0;
    w.w_right = 0.0;
  } else if (w.w_left <= snap && w.step + 1 <= grid.steps - 1) {
    ++w.step;
    w.w_left = 1.0;
    w.w_right = 0.0;
  }
  return w;
}

AdjointTrajectory adjoint_sweep(const Mesh1D& mesh,
                                const StrainEnergyModel& model,
                                const TimeGrid& grid, double kappa,
                                const StateTrajectory& state,
                                const std::vector<JumpInjection>& injections,
                                const NodalField& b0, const NodalField& b1) {
  const int n = mesh.n_free();
  const int N = grid.steps;
  const double dt = grid.dt;

  const TriDiag mass = assemble_mass(mesh);
  const TriDiag damping = assemble_damping(mesh, kappa);
  const TriDiagSolver mass_solver(mass);

  // Covector injections accumulated per step.
  std::vector<NodalField> inj0(N + 1, NodalField::Zero(n));
  std::vector<NodalField> inj1(N + 1, NodalField::Zero(n));
  for (const JumpInjection& j : injections) {
    if (j.step < 0 || j.step > N)
      throw std::invalid_argument("jump injection step out of range");
    inj0[j.step] += j.a0;
    inj1[j.step] += j.a1;
  }

  AdjointTrajectory adj;
  adj.zeta0.assign(N + 1, NodalField::Zero(n));
  adj.zeta1.assign(N + 1, NodalField::Zero(n));
  adj.zeta0_plus.assign(N + 1, NodalField::Zero(n));
  adj.zeta1_plus.assign(N + 1, NodalField::Zero(n));
  adj.pi = Eigen::VectorXd::Zero(N);
  adj.constraint_residual = Eigen::VectorXd::Zero(N + 1);

  adj.zeta0_plus[N] = mass_solver.solve(-b0);
  adj.zeta1_plus[N] = mass_solver.solve(-b1);
  adj.zeta0[N] = adj.zeta0_plus[N] - mass_solver.solve(inj0[N]);
  adj.zeta1[N] = adj.zeta1_plus[N] - mass_solver.solve(inj1[N]);

  for (int k = N - 1; k >= 0; --k) {
    const TriDiag k_frozen = tangent_stiffness(mesh, model, state.u[k]);
    const NodalField g_vol = volume_and_gradient(mesh, state.u[k]).gradient;

    // (M + dt kappa A + dt^2 K_k) zeta1 + dt^2 pi G = M zeta1_{k+1} + dt M zeta0_{k+1},
    // G^T zeta1 = 0.
    TriDiag lhs = k_frozen;
    lhs *= dt * dt;
    lhs.axpy(dt, damping);
    lhs += mass;

    const NodalField rhs =
        mass.apply(adj.zeta1[k + 1]) + dt * mass.apply(adj.zeta0[k + 1]);
    const BorderedSolution sol =
        solve_bordered(lhs, (dt * dt) * g_vol, g_vol, rhs, 0.0);
    adj.zeta1_plus[k] = sol.x;
    adj.pi[k] = sol.y;
    adj.constraint_residual[k] = g_vol.dot(sol.x);

    adj.zeta0_plus[k] =
        adj.zeta0[k + 1] -
        dt * mass_solver.solve(k_frozen.apply(sol.x) + sol.y * g_vol);

    adj.zeta0[k] = adj.zeta0_plus[k] - mass_solver.solve(inj0[k]);
    adj.zeta1[k] = adj.zeta1_plus[k] - mass_solver.solve(inj1[k]);
  }
  return adj;
}

AdjointTrajectory solve_adjoint(const Mesh1D& mesh,
                                const StrainEnergyModel& model,
                                const TimeGrid& grid, double kappa,
                                const StateTrajectory& state, double tau,
                                const ObjectiveConfig& objective) {
  objective.validate();
  if (!(tau > 0.0 && tau < grid.T))
    throw std::domain_error("tau must lie in (0, T)");

  std::vector<JumpInjection> injections;
  auto inject = [&](double at, double scale) {
    const JumpWeights w = jump_interpolation(at, grid);
    for (const auto& [step, weight] :
         {std::pair<int, double>{w.step, w.w_left},
          std::pair<int, double>{w.step + 1, w.w_right}}) {
      if (weight == 0.0) continue;
      auto [a0, a1] = pressure_sensitivity(mesh, model, kappa, state.u[step],
                                           state.udot[step]);
      injections.push_back({step, scale * weight * a0, scale * weight * a1});
    }
  };

  if (objective.phi1 == ObjectiveConfig::Phi1::PressureAtTau) {
    inject(tau, 1.0);
  } else {
    inject(tau, -1.0 / objective.eps);
    inject(tau + objective.eps, 1.0 / objective.eps);
  }

  NodalField b0 = NodalField::Zero(mesh.n_free());
  NodalField b1 = NodalField::Zero(mesh.n_free());
  if (objective.phi2_derivative) {
    auto [d0, d1] = objective.phi2_derivative(state.u[grid.steps],
                                              state.udot[grid.steps]);
    b0 = d0;
    b1 = d1;
  }

  AdjointTrajectory adj =
      adjoint_sweep(mesh, model, grid, kappa, state, injections, b0, b1);
  adj.jump_time = tau;
  return adj;
}

}  // namespace elastoc
