#pragma once

#include <functional>
#include <utility>

#include "elastoc/adjoint.hpp"
#include "elastoc/control.hpp"
#include "elastoc/forward.hpp"

namespace elastoc {

/// Everything defining one optimal-control problem instance: geometry,
/// material, time grid, damping, control operator, objective, surface load
/// and initial data.
struct ControlProblem {
  Mesh1D mesh;
  ControlSpace space;
  StrainEnergyModel model;
  TimeGrid grid;
  double kappa = 2e-4;
  OperatorKind op_kind = OperatorKind::Plain;
  ObjectiveConfig objective;
  std::function<double(double)> g = [](double) { return 0.0; };
  NodalField u0;
  NodalField udot0;
  ForwardOptions forward_opts;

  ControlProblem(Mesh1D mesh_, StrainEnergyModel model_, TimeGrid grid_,
                 double kappa_)
      : mesh(std::move(mesh_)),
        space(mesh),
        model(model_),
        grid(grid_),
        kappa(kappa_),
        u0(NodalField::Zero(mesh.n_free())),
        udot0(NodalField::Zero(mesh.n_free())) {}

  StateTrajectory solve(const ControlGrid& xi) const {
    return solve_forward(mesh, model, grid, kappa, &xi, &space, op_kind, g,
                         u0, udot0, forward_opts);
  }
  AdjointTrajectory adjoint(const StateTrajectory& state, double tau) const {
    return solve_adjoint(mesh, model, grid, kappa, state, tau, objective);
  }
};

}  // namespace elastoc
