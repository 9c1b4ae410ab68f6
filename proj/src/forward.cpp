#include "elastoc/forward.hpp"

#include <cmath>
#include <string>

namespace elastoc {

namespace {

double boundary_gradient(const Mesh1D& mesh, const NodalField& f) {
  return element_gradient(mesh, f, mesh.n_elements() - 1);
}

}  // namespace

NewtonUpdate newton_step(const TriDiag& tangent, const NodalField& border,
                         const NodalField& residual, double constraint) {
  const BorderedSolution s =
      solve_bordered(tangent, border, border, -residual, -constraint);
  return {s.x, s.y};
}

StateTrajectory solve_forward(
    const Mesh1D& mesh, const StrainEnergyModel& model, const TimeGrid& grid,
    double kappa, const ControlGrid* xi, const ControlSpace* space,
    OperatorKind op_kind, const std::function<double(double)>& g,
    const NodalField& u0, const NodalField& udot0, const ForwardOptions& opts,
    const std::function<NodalField(double)>& extra_load) {
  const int n = mesh.n_free();
  const int last = n - 1;
  const double dt = grid.dt;
  using Constraint = ForwardOptions::Constraint;

  const TriDiag mass = assemble_mass(mesh);
  const TriDiag damping = assemble_damping(mesh, kappa);
  const TriDiag k0 = tangent_stiffness(mesh, model, NodalField::Zero(n));

  auto residual_force = [&](const NodalField& u) -> NodalField {
    return opts.linearized_at_zero ? k0.apply(u) : internal_force(mesh, model, u);
  };
  auto residual_tangent = [&](const NodalField& u) -> TriDiag {
    return opts.linearized_at_zero ? k0 : tangent_stiffness(mesh, model, u);
  };

  StateTrajectory traj;
  traj.u.assign(grid.steps + 1, NodalField::Zero(n));
  traj.udot.assign(grid.steps + 1, NodalField::Zero(n));
  traj.pressure = Eigen::VectorXd::Zero(grid.steps + 1);
  traj.volume_residual = Eigen::VectorXd::Zero(grid.steps + 1);
  traj.u[0] = u0;
  traj.udot[0] = udot0;
  traj.volume_ref = volume_and_gradient(mesh, u0).value;
  traj.compatibility_residual = std::abs(
      recover_pressure_diagnostic(mesh, model, kappa, u0, udot0, g(0.0)));

  const bool constrained = opts.constraint != Constraint::Off;

  for (int k = 0; k < grid.steps; ++k) {
    const NodalField& uk = traj.u[k];
    const NodalField& vk = traj.udot[k];
    const double pk = traj.pressure[k];

    // Interval-constant control on [t_k, t_{k+1}); trapezoidal surface and
    // manufactured loads.
    NodalField load = NodalField::Zero(n);
    if (xi && space) load += control_load(mesh, *space, xi->at_step(k), op_kind);
    load[last] += 0.5 * (g(grid.time(k)) + g(grid.time(k + 1)));
    if (extra_load)
      load += 0.5 * (extra_load(grid.time(k)) + extra_load(grid.time(k + 1)));

    const NodalField r_old = residual_force(uk);
    const NodalField g_old = volume_and_gradient(mesh, uk).gradient;
    const double tol =
        opts.newton_tol * std::max(1.0, dt * load.lpNorm<Eigen::Infinity>());

    NodalField v = vk;
    double p = pk;

    auto displacement = [&](const NodalField& v_new) -> NodalField {
      return uk + (0.5 * dt) * (vk + v_new);
    };
    // theta = 1/2 residual in the velocity unknown, multiplier term included
    // with the trapezoidal weights (p_k known, p_new unknown).
    auto step_residual = [&](const NodalField& v_new, double p_new,
                             const NodalField& u_new,
                             const NodalField& g_new) -> NodalField {
      NodalField r = mass.apply(v_new - vk);
      r += (0.5 * dt) * damping.apply(v_new + vk);
      r += (0.5 * dt) * (residual_force(u_new) + r_old);
      if (constrained) r += (0.5 * dt) * (p_new * g_new + pk * g_old);
      r -= dt * load;
      return r;
    };
    auto system_tangent = [&](const NodalField& u_new) -> TriDiag {
      TriDiag jac = residual_tangent(u_new);
      jac *= 0.25 * dt * dt;
      jac.axpy(0.5 * dt, damping);
      jac += mass;
      return jac;
    };

    bool converged = false;

    if (opts.constraint == Constraint::AugmentedLagrangian) {
      // Inner Newton on the penalized residual, outer multiplier updates
      // p <- p + rho (V - V_ref) until the volume defect passes al_tol.
      for (int outer = 0; outer < opts.al_max_outer && !converged; ++outer) {
        bool inner_ok = false;
        for (int it = 0; it < opts.newton_max_iter; ++it) {
          const NodalField u_new = displacement(v);
          const VolumeResult vol = volume_and_gradient(mesh, u_new);
          const double p_eff = p + opts.al_rho * (vol.value - traj.volume_ref);
          const NodalField res = step_residual(v, p_eff, u_new, vol.gradient);
          if (res.lpNorm<Eigen::Infinity>() <= tol) {
            inner_ok = true;
            break;
          }
          TriDiag jac = system_tangent(u_new);
          jac.diag[last] += opts.al_rho * 0.25 * dt * dt;
          v += TriDiagSolver(jac).solve(-res);
          ++traj.total_newton_iters;
        }
        if (!inner_ok) break;
        const double defect =
            volume_and_gradient(mesh, displacement(v)).value - traj.volume_ref;
        p += opts.al_rho * defect;
        converged = std::abs(defect) <= opts.al_tol;
      }
    } else if (opts.constraint == Constraint::Off) {
      for (int it = 0; it < opts.newton_max_iter; ++it) {
        const NodalField u_new = displacement(v);
        const NodalField res =
            step_residual(v, 0.0, u_new, NodalField::Zero(n));
        if (res.lpNorm<Eigen::Infinity>() <= tol) {
          converged = true;
          break;
        }
        v += TriDiagSolver(system_tangent(u_new)).solve(-res);
        ++traj.total_newton_iters;
      }
    } else {
      // Exact bordered saddle-point solve per Newton iteration.
      for (int it = 0; it < opts.newton_max_iter; ++it) {
        const NodalField u_new = displacement(v);
        const VolumeResult vol = volume_and_gradient(mesh, u_new);
        const NodalField res = step_residual(v, p, u_new, vol.gradient);
        const double c_res = vol.value - traj.volume_ref;
        if (res.lpNorm<Eigen::Infinity>() <= tol &&
            std::abs(c_res) <= opts.al_tol) {
          converged = true;
          break;
        }
        const NodalField border = (0.5 * dt) * vol.gradient;
        const NewtonUpdate up =
            newton_step(system_tangent(u_new), border, res, c_res);
        v += up.du;
        p += up.dpressure;
        ++traj.total_newton_iters;
      }
    }

    if (!converged)
      throw std::runtime_error(
          "forward solve: Newton did not converge at step " +
          std::to_string(k + 1));

    traj.udot[k + 1] = v;
    traj.u[k + 1] = displacement(v);
    traj.pressure[k + 1] = constrained ? p : 0.0;
    traj.volume_residual[k + 1] =
        volume_and_gradient(mesh, traj.u[k + 1]).value - traj.volume_ref;
    // The analysis assumes Id + u stays invertible; reject states that
    // leave that regime.
    for (int e = 0; e < mesh.n_elements(); ++e) {
      if (1.0 + element_gradient(mesh, traj.u[k + 1], e) <= 0.0)
        throw std::runtime_error(
            "forward solve: non-injective deformation at step " +
            std::to_string(k + 1));
    }
  }
  return traj;
}

double recover_pressure_diagnostic(const Mesh1D& mesh,
                                   const StrainEnergyModel& model,
                                   double kappa, const NodalField& u,
                                   const NodalField& udot, double g) {
  const double du = boundary_gradient(mesh, u);
  if (1.0 + du <= 0.0) throw std::runtime_error("non-injective deformation");
  const double stress =
      (1.0 + du) * scalar_energy(model, du + 0.5 * du * du).S;
  // (det Phi)^{-1} Phi^T = 1 in 1D, |Gamma_N| = 1.
  return g - kappa * boundary_gradient(mesh, udot) - stress;
}

double recover_pressure_deformed_measure(const Mesh1D& mesh,
                                         const StrainEnergyModel& model,
                                         double kappa, const NodalField& u,
                                         const NodalField& udot, double g) {
  const double du = boundary_gradient(mesh, u);
  if (1.0 + du <= 0.0) throw std::runtime_error("non-injective deformation");
  const double stress =
      (1.0 + du) * scalar_energy(model, du + 0.5 * du * du).S;
  const double deformed_measure = 1.0;  // |cof(Phi) n| = 1 in 1D
  return (g - kappa * boundary_gradient(mesh, udot) - stress) /
         deformed_measure;
}

}  // namespace elastoc
