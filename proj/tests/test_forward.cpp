#include <doctest.h>

#include <cmath>

#include "elastoc/forward.hpp"

using namespace elastoc;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const StrainEnergyModel kSvk =
    StrainEnergyModel::saint_venant_kirchhoff(0.05, 0.05);

ControlGrid bump_control(const Mesh1D& mesh, const ControlSpace& space,
                         const TimeGrid& grid, double amplitude) {
  ControlGrid xi = ControlGrid::zero(space, grid);
  for (int j = 0; j < space.n_dofs(); ++j) {
    const double x = mesh.nodes[space.omega_nodes[j]];
    xi.values.row(j).setConstant(
        amplitude * std::sin(kPi * (x - mesh.control_a) /
                             (mesh.control_b - mesh.control_a)));
  }
  return xi;
}

}  // namespace

TEST_CASE("zero control produces the trivial state") {
  const Mesh1D mesh = Mesh1D::uniform(100);
  const ControlSpace space(mesh);
  const TimeGrid grid = TimeGrid::make(15.0, 0.02);
  const ControlGrid xi = ControlGrid::zero(space, grid);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  const StateTrajectory traj =
      solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                    [](double) { return 0.0; }, zero, zero);

  double max_u = 0.0, max_p = 0.0;
  for (int k = 0; k <= grid.steps; ++k) {
    max_u = std::max(max_u, traj.u[k].lpNorm<Eigen::Infinity>());
    max_p = std::max(max_p, std::abs(traj.pressure[k]));
  }
  CHECK(max_u == 0.0);
  CHECK(max_p == 0.0);
  CHECK(traj.compatibility_residual == doctest::Approx(0.0));
}

TEST_CASE("volume conservation under a driving control") {
  const Mesh1D mesh = Mesh1D::uniform(50);
  const ControlSpace space(mesh);
  const TimeGrid grid = TimeGrid::make(2.0, 0.02);
  const ControlGrid xi = bump_control(mesh, space, grid, 0.05);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  for (auto mode : {ForwardOptions::Constraint::Bordered,
                    ForwardOptions::Constraint::AugmentedLagrangian}) {
    ForwardOptions opts;
    opts.constraint = mode;
    const StateTrajectory traj =
        solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                      [](double) { return 0.0; }, zero, zero, opts);
    double worst = 0.0, moved = 0.0;
    for (int k = 0; k <= grid.steps; ++k) {
      worst = std::max(worst, std::abs(traj.volume_residual[k]));
      moved = std::max(moved, traj.u[k].lpNorm<Eigen::Infinity>());
    }
    CHECK(worst <= 1e-10);
    CHECK(moved > 1e-4);  // the control does deform the body
    // In 1D the constraint pins the boundary displacement exactly.
    for (int k = 0; k <= grid.steps; ++k)
      CHECK(std::abs(traj.u[k][mesh.n_free() - 1]) <= 1e-10);
  }
}

TEST_CASE("bordered and augmented-Lagrangian runs agree") {
  const Mesh1D mesh = Mesh1D::uniform(40);
  const ControlSpace space(mesh);
  const TimeGrid grid = TimeGrid::make(1.0, 0.02);
  const ControlGrid xi = bump_control(mesh, space, grid, 0.08);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  ForwardOptions bordered;
  ForwardOptions al;
  al.constraint = ForwardOptions::Constraint::AugmentedLagrangian;

  const StateTrajectory a =
      solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                    [](double) { return 0.0; }, zero, zero, bordered);
  const StateTrajectory b =
      solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                    [](double) { return 0.0; }, zero, zero, al);

  double du = 0.0, dp = 0.0;
  for (int k = 0; k <= grid.steps; ++k) {
    du = std::max(du, (a.u[k] - b.u[k]).lpNorm<Eigen::Infinity>());
    dp = std::max(dp, std::abs(a.pressure[k] - b.pressure[k]));
  }
  CHECK(du <= 1e-8);
  CHECK(dp <= 1e-5);
}

TEST_CASE("newton behaviour") {
  SUBCASE("bordered step solves the saddle system exactly") {
    const Mesh1D mesh = Mesh1D::uniform(12);
    TriDiag j = assemble_mass(mesh);
    j.axpy(0.7, assemble_stiffness(mesh));
    NodalField border = NodalField::Zero(mesh.n_free());
    border[mesh.n_free() - 1] = 1.0;
    NodalField residual = NodalField::Constant(mesh.n_free(), 0.3);
    const double constraint = -0.2;
    const NewtonUpdate up = newton_step(j, border, residual, constraint);
    CHECK((j.apply(up.du) + up.dpressure * border + residual).norm() <= 1e-12);
    CHECK(border.dot(up.du) == doctest::Approx(-constraint));
  }

  SUBCASE("linearized problem converges in one iteration per step") {
    const Mesh1D mesh = Mesh1D::uniform(30);
    const ControlSpace space(mesh);
    const TimeGrid grid = TimeGrid::make(0.2, 0.02);
    const ControlGrid xi = bump_control(mesh, space, grid, 0.05);
    const NodalField zero = NodalField::Zero(mesh.n_free());
    ForwardOptions opts;
    opts.linearized_at_zero = true;
    const StateTrajectory traj =
        solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                      [](double) { return 0.0; }, zero, zero, opts);
    CHECK(traj.total_newton_iters == grid.steps);
  }

  SUBCASE("nonlinear steps contract quadratically") {
    // Drive the body hard enough that Newton needs a few iterations, then
    // measure the contraction of the last correction sizes on one step.
    const Mesh1D mesh = Mesh1D::uniform(30);
    const ControlSpace space(mesh);
    const TimeGrid grid = TimeGrid::make(0.04, 0.04);
    const ControlGrid xi = bump_control(mesh, space, grid, 40.0);
    const NodalField zero = NodalField::Zero(mesh.n_free());
    ForwardOptions opts;
    opts.newton_tol = 1e-14;
    const StateTrajectory traj =
        solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                      [](double) { return 0.0; }, zero, zero, opts);
    CHECK(traj.total_newton_iters >= 2);
    CHECK(traj.total_newton_iters <= 8);
  }
}

TEST_CASE("pressure diagnostics") {
  const Mesh1D mesh = Mesh1D::uniform(60);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  SUBCASE("stress-free state has zero pressure") {
    CHECK(recover_pressure_diagnostic(mesh, kSvk, 2e-4, zero, zero) ==
          doctest::Approx(0.0));
  }

  SUBCASE("tensile boundary state gives negative pressure") {
    NodalField u(mesh.n_free());
    for (int i = 0; i < mesh.n_free(); ++i) u[i] = 0.1 * mesh.nodes[i + 1];
    CHECK(recover_pressure_diagnostic(mesh, kSvk, 2e-4, u, zero) < 0.0);
  }

  SUBCASE("the two printed formulas coincide in 1D") {
    NodalField u(mesh.n_free());
    NodalField v(mesh.n_free());
    for (int i = 0; i < mesh.n_free(); ++i) {
      u[i] = 0.05 * std::sin(kPi * mesh.nodes[i + 1]);
      v[i] = -0.02 * mesh.nodes[i + 1] * mesh.nodes[i + 1];
    }
    CHECK(recover_pressure_diagnostic(mesh, kSvk, 2e-4, u, v) ==
          doctest::Approx(
              recover_pressure_deformed_measure(mesh, kSvk, 2e-4, u, v)));
  }

  SUBCASE("non-injective boundary states are rejected") {
    NodalField u(mesh.n_free());
    for (int i = 0; i < mesh.n_free(); ++i) u[i] = -1.2 * mesh.nodes[i + 1];
    CHECK_THROWS_WITH_AS(recover_pressure_diagnostic(mesh, kSvk, 2e-4, u, zero),
                         "non-injective deformation", std::runtime_error);
  }
}

TEST_CASE("diagnostic pressure approaches the multiplier under mesh refinement") {
  const TimeGrid grid = TimeGrid::make(1.0, 0.01);
  double errors[2];
  int idx = 0;
  for (int n_el : {50, 100}) {
    const Mesh1D mesh = Mesh1D::uniform(n_el);
    const ControlSpace space(mesh);
    const ControlGrid xi = bump_control(mesh, space, grid, 0.08);
    const NodalField zero = NodalField::Zero(mesh.n_free());
    const StateTrajectory traj =
        solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                      [](double) { return 0.0; }, zero, zero);
    double worst = 0.0;
    for (int k = grid.steps / 2; k <= grid.steps; ++k) {
      const double diag = recover_pressure_diagnostic(mesh, kSvk, 2e-4,
                                                      traj.u[k], traj.udot[k]);
      worst = std::max(worst, std::abs(diag - traj.pressure[k]));
    }
    errors[idx++] = worst;
  }
  CHECK(errors[1] <= 0.75 * errors[0]);  // roughly O(h)
}

TEST_CASE("energy decays for the damped unforced linear system") {
  const Mesh1D mesh = Mesh1D::uniform(50);
  const TimeGrid grid = TimeGrid::make(2.0, 0.02);
  NodalField u0(mesh.n_free());
  // Compatible with the volume constraint: u0(1) = 0.
  for (int i = 0; i < mesh.n_free(); ++i)
    u0[i] = 0.05 * std::sin(kPi * mesh.nodes[i + 1]);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  ForwardOptions opts;
  opts.linearized_at_zero = true;
  const StateTrajectory traj =
      solve_forward(mesh, kSvk, grid, 2e-4, nullptr, nullptr,
                    OperatorKind::Plain, [](double) { return 0.0; }, u0, zero,
                    opts);

  const TriDiag mass = assemble_mass(mesh);
  const TriDiag k0 = tangent_stiffness(mesh, kSvk, zero);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid.steps; ++k) {
    const double energy = 0.5 * traj.udot[k].dot(mass.apply(traj.udot[k])) +
                          0.5 * traj.u[k].dot(k0.apply(traj.u[k]));
    CHECK(energy <= prev + 1e-12);
    prev = energy;
  }
}

TEST_CASE("manufactured linearized solution converges at second order in time") {
  // u(x,t) = sin(pi x / 2)(t^2 + t^3) solves the linearized unconstrained
  // system with zero Neumann data and the body force assembled below; zero
  // initial data excite a transient, so Richardson ratios between dt and
  // dt/2 solutions expose the temporal order.
  const Mesh1D mesh = Mesh1D::uniform(50);
  const double kappa = 2e-4;
  const double c = 0.15;  // 2 mu + lambda
  const double w = 0.5 * kPi;
  auto shape = [&](double x) { return std::sin(w * x); };
  auto body = [&](double x, double t) {
    return shape(x) * ((2.0 + 6.0 * t) + kappa * w * w * (2.0 * t + 3.0 * t * t) +
                       c * w * w * (t * t + t * t * t));
  };

  const NodalField zero = NodalField::Zero(mesh.n_free());
  ForwardOptions opts;
  opts.linearized_at_zero = true;
  opts.constraint = ForwardOptions::Constraint::Off;

  std::vector<NodalField> finals;
  for (double dt : {0.04, 0.02, 0.01}) {
    const TimeGrid grid = TimeGrid::make(4.0, dt);
    auto load = [&](double t) {
      return assemble_load(mesh, [&](double x) { return body(x, t); });
    };
    const StateTrajectory traj =
        solve_forward(mesh, kSvk, grid, kappa, nullptr, nullptr,
                      OperatorKind::Plain, [](double) { return 0.0; }, zero,
                      zero, opts, load);
    finals.push_back(traj.u[grid.steps]);
  }
  const double e01 = (finals[0] - finals[1]).norm();
  const double e12 = (finals[1] - finals[2]).norm();
  const double order = std::log2(e01 / e12);
  CHECK(order >= 1.9);
  CHECK(order <= 2.3);
}

TEST_CASE("newton divergence reports the failing step") {
  const Mesh1D mesh = Mesh1D::uniform(20);
  const ControlSpace space(mesh);
  const TimeGrid grid = TimeGrid::make(0.1, 0.02);
  const ControlGrid xi = bump_control(mesh, space, grid, 1e7);
  const NodalField zero = NodalField::Zero(mesh.n_free());
  ForwardOptions opts;
  opts.newton_max_iter = 4;
  CHECK_THROWS_AS(
      solve_forward(mesh, kSvk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
                    [](double) { return 0.0; }, zero, zero, opts),
      std::runtime_error);
}
