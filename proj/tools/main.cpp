#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "elastoc/config.hpp"
#include "elastoc/io.hpp"
#include "elastoc/objective.hpp"
#include "elastoc/optimizer.hpp"

namespace {

using namespace elastoc;
namespace fs = std::filesystem;

constexpr double kPi = 3.141592653589793238462643383279502884;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  double dt = 0.0;
  double mesh_h = 0.0;
  bool seedless = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file");
  cmd->add_option("--set", args.overrides, "override, key=value (repeatable)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--dt", args.dt, "time step override");
  cmd->add_option("--mesh-h", args.mesh_h, "mesh size override");
  cmd->add_flag("--seedless", args.seedless,
                "run the forward solve twice and assert bitwise identity");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig config = args.config_path.empty()
                         ? parse_config_text("")
                         : parse_config_file(args.config_path);
  for (const auto& o : args.overrides) apply_override(config, o);
  if (args.dt > 0.0) apply_override(config, "dt=" + format_full(args.dt));
  if (args.mesh_h > 0.0)
    apply_override(config, "mesh_h=" + format_full(args.mesh_h));
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

fs::path ensure_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

void warn_compatibility(const StateTrajectory& traj) {
  if (traj.compatibility_residual > 1e-10)
    std::cerr << "warning: initial data violate the boundary compatibility "
                 "condition by "
              << traj.compatibility_residual << "\n";
}

bool states_identical(const StateTrajectory& a, const StateTrajectory& b) {
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    if ((a.u[k] - b.u[k]).lpNorm<Eigen::Infinity>() != 0.0) return false;
    if ((a.udot[k] - b.udot[k]).lpNorm<Eigen::Infinity>() != 0.0) return false;
  }
  return (a.pressure - b.pressure).lpNorm<Eigen::Infinity>() == 0.0;
}

void assert_determinism(const ControlProblem& problem, const ControlGrid& xi) {
  const StateTrajectory a = problem.solve(xi);
  const StateTrajectory b = problem.solve(xi);
  if (!states_identical(a, b))
    throw std::runtime_error("determinism check failed: repeated forward "
                             "solves differ");
}

ControlGrid load_control(const ControlProblem& problem,
                         const std::string& path) {
  if (path.empty()) return ControlGrid::zero(problem.space, problem.grid);
  return read_control_grid(path, problem.space, problem.grid);
}

/// Built-in verification state for gradient checks when the configured data
/// are all trivial: a single smooth mode keeps the pressure trace resolved.
void apply_gradcheck_base(ControlProblem& problem) {
  if (!problem.u0.isZero(0.0) || !problem.udot0.isZero(0.0)) return;
  for (int i = 1; i < problem.mesh.n_nodes(); ++i)
    problem.u0[i - 1] = 0.05 * std::sin(kPi * problem.mesh.nodes[i]);
}

int run_forward(const CommonArgs& args, const std::string& control_path) {
  const RunConfig config = load_config(args);
  const ControlProblem problem = make_problem(config);
  const ControlGrid xi = load_control(problem, control_path);
  if (args.seedless) assert_determinism(problem, xi);

  const StateTrajectory traj = problem.solve(xi);
  warn_compatibility(traj);

  const fs::path dir = ensure_out_dir(config);
  write_state_trajectory((dir / "state.tsv").string(), problem.mesh,
                         problem.grid, traj);
  write_pressure_trace((dir / "pressure.tsv").string(), problem.grid, traj,
                       objective_pressure_series(problem, traj));
  double worst_volume = 0.0;
  for (int k = 0; k <= problem.grid.steps; ++k)
    worst_volume = std::max(worst_volume, std::abs(traj.volume_residual[k]));
  std::cout << "forward: " << problem.grid.steps << " steps, max |V - V0| = "
            << worst_volume << ", outputs in " << dir.string() << "\n";
  return 0;
}

int run_adjoint(const CommonArgs& args, const std::string& control_path,
                double tau) {
  const RunConfig config = load_config(args);
  const ControlProblem problem = make_problem(config);
  const ControlGrid xi = load_control(problem, control_path);
  if (args.seedless) assert_determinism(problem, xi);
  if (tau <= 0.0) tau = 0.5 * problem.grid.T;

  const StateTrajectory traj = problem.solve(xi);
  warn_compatibility(traj);
  const AdjointTrajectory adj = problem.adjoint(traj, tau);

  const fs::path dir = ensure_out_dir(config);
  write_adjoint_trajectory((dir / "adjoint.tsv").string(), problem.mesh,
                           problem.grid, adj);
  double worst_constraint = 0.0;
  for (int k = 0; k < problem.grid.steps; ++k)
    worst_constraint =
        std::max(worst_constraint, std::abs(adj.constraint_residual[k]));
  std::cout << "adjoint: tau = " << tau
            << ", max |<zeta1, cof n>| = " << worst_constraint
            << ", outputs in " << dir.string() << "\n";
  return 0;
}

int run_gradcheck(const CommonArgs& args, const std::string& control_path,
                  double tau, int directions) {
  const RunConfig config = load_config(args);
  ControlProblem problem = make_problem(config);
  const ControlGrid xi = load_control(problem, control_path);
  if (control_path.empty()) apply_gradcheck_base(problem);
  if (args.seedless) assert_determinism(problem, xi);
  if (tau <= 0.0) tau = 0.2 * problem.grid.T;

  const std::vector<double> h_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const FdReport report = fd_check(problem, xi, tau, directions, h_schedule);

  const fs::path dir = ensure_out_dir(config);
  TsvWriter w((dir / "gradcheck.tsv").string(),
              {"direction", "h", "fd", "analytic", "abs_error", "rel_error"});
  for (const FdRow& row : report.rows)
    w.row({static_cast<double>(row.direction), row.h, row.fd, row.analytic,
           row.abs_error, row.rel_error});
  for (std::size_t d = 0; d < report.best_rel.size(); ++d)
    std::cout << "direction " << d << ": best relative error "
              << report.best_rel[d] << "\n";
  std::cout << "gradcheck: worst best-relative error "
            << report.worst_best_rel << ", table in " << dir.string() << "\n";
  return 0;
}

int run_optimize(const CommonArgs& args) {
  const RunConfig config = load_config(args);
  const ControlProblem problem = make_problem(config);
  if (args.seedless)
    assert_determinism(problem, ControlGrid::zero(problem.space, problem.grid));

  const OptimizerReport report =
      optimize(problem, make_optimizer_config(config));

  const fs::path dir = ensure_out_dir(config);
  {
    TsvWriter w((dir / "iterations.tsv").string(),
                {"iter", "J", "grad_norm_xi", "grad_tau", "tau", "step"});
    for (const IterationRecord& it : report.iterations)
      w.row({static_cast<double>(it.iter), it.J, it.grad_norm_xi, it.grad_tau,
             it.tau, it.step});
  }

  ControlGrid xi;
  xi.values = report.final_point.xi;
  write_control_grid((dir / "xi_final.tsv").string(), problem.mesh,
                     problem.space, problem.grid, xi);

  const StateTrajectory traj = problem.solve(xi);
  write_state_trajectory((dir / "state.tsv").string(), problem.mesh,
                         problem.grid, traj);
  write_pressure_trace((dir / "pressure.tsv").string(), problem.grid, traj,
                       objective_pressure_series(problem, traj));

  // Snapshots at the instants of the reference figures, available when the
  // reference grid is active.
  if (config.T == 15.0 && config.dt == 0.02) {
    const std::vector<double> control_times = {0.02, 1.0, 1.5, 2.0, 2.5, 3.0,
                                               3.5, 4.0, 4.5, 5.0, 5.5, 6.0,
                                               6.5, 7.0, 7.46, 7.48};
    const std::vector<double> state_times = {0.02, 1.0, 2.5, 3.0, 4.0, 5.0,
                                             6.0, 6.3, 7.0, 8.0, 9.0, 10.0,
                                             12.0, 13.0, 14.0, 15.0};
    for (double t : control_times) {
      const int k = std::min(static_cast<int>(std::lround(t / config.dt)),
                             problem.grid.steps - 1);
      NodalField field = NodalField::Zero(problem.mesh.n_free());
      for (int j = 0; j < problem.space.n_dofs(); ++j) {
        const int node = problem.space.omega_nodes[j];
        if (node > 0) field[node - 1] = xi.values(j, k);
      }
      write_nodal_snapshot(
          (dir / ("xi_t" + format_full(t) + ".tsv")).string(), problem.mesh,
          field);
    }
    for (double t : state_times) {
      const int k = static_cast<int>(std::lround(t / config.dt));
      write_nodal_snapshot((dir / ("u_t" + format_full(t) + ".tsv")).string(),
                           problem.mesh, traj.u[k]);
      write_nodal_snapshot(
          (dir / ("udot_t" + format_full(t) + ".tsv")).string(), problem.mesh,
          traj.udot[k]);
    }
  }

  std::ofstream summary(dir / "summary.txt");
  summary.precision(17);
  summary << "J_final = " << report.J_final << "\n"
          << "tau_final = " << report.final_point.tau << "\n"
          << "grad_norm_final = " << report.grad_norm_final << "\n"
          << "iterations = " << report.iterations.size() - 1 << "\n"
          << "forward_solves = " << report.forward_solves << "\n"
          << "termination = " << report.termination << "\n";

  std::cout << "optimize: J = " << report.J_final
            << ", tau = " << report.final_point.tau
            << ", |G| = " << report.grad_norm_final << ", "
            << report.termination << "; outputs in " << dir.string() << "\n";
  return 0;
}

int check(const char* name, bool ok) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
  return ok ? 0 : 1;
}

int run_selftest() {
  int failures = 0;
  const StrainEnergyModel svk =
      StrainEnergyModel::saint_venant_kirchhoff(0.05, 0.05);

  {  // constitutive finite-difference spot check
    Mat e(2, 2);
    e << 0.08, 0.02, 0.02, -0.05;
    const auto ed = energy_and_derivatives(svk, e);
    Mat dir(2, 2);
    dir << 0.4, -0.1, -0.1, 0.7;
    const double h = 1e-6;
    const double fd = (energy_and_derivatives(svk, e + h * dir).W -
                       energy_and_derivatives(svk, e - h * dir).W) /
                      (2.0 * h);
    const double an = (ed.sigma_check.array() * dir.array()).sum();
    failures += check("constitutive derivative (FD vs analytic)",
                      std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }

  const Mesh1D mesh = Mesh1D::uniform(50);
  const ControlSpace space(mesh);
  const TimeGrid grid = TimeGrid::make(2.0, 0.02);
  const NodalField zero = NodalField::Zero(mesh.n_free());

  {  // trivial state
    const ControlGrid xi = ControlGrid::zero(space, grid);
    const StateTrajectory traj = solve_forward(
        mesh, svk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
        [](double) { return 0.0; }, zero, zero);
    double max_u = 0.0;
    for (const auto& u : traj.u)
      max_u = std::max(max_u, u.lpNorm<Eigen::Infinity>());
    failures += check("zero control keeps the trivial state", max_u == 0.0);
  }

  {  // volume conservation under drive
    ControlGrid xi = ControlGrid::zero(space, grid);
    xi.values.setConstant(0.05);
    const StateTrajectory traj = solve_forward(
        mesh, svk, grid, 2e-4, &xi, &space, OperatorKind::Plain,
        [](double) { return 0.0; }, zero, zero);
    double worst = 0.0;
    for (int k = 0; k <= grid.steps; ++k)
      worst = std::max(worst, std::abs(traj.volume_residual[k]));
    failures += check("volume conserved to 1e-10", worst <= 1e-10);
  }

  {  // warp round trip
    const TimeWarp warp(15.0, 3.85, 0.02, 0.01);
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double t = 15.0 * i / 300.0;
      worst = std::max(worst, std::abs(warp.t(warp.s(t)) - t));
    }
    failures += check("warp round trip exact to 1e-14", worst <= 1e-14);
  }

  {  // sigma_L bilinear symmetry
    Mat gu(2, 2), gv(2, 2), gw(2, 2);
    gu << 0.1, -0.07, 0.03, 0.2;
    gv << -0.3, 0.5, 0.2, 0.1;
    gw << 0.6, -0.1, 0.4, -0.2;
    const double vw = (sigma_L_apply(svk, gu, gv).array() * gw.array()).sum();
    const double wv = (sigma_L_apply(svk, gu, gw).array() * gv.array()).sum();
    failures += check("sigma_L bilinear form symmetric to 1e-12",
                      std::abs(vw - wv) <= 1e-12 * std::max(1.0, std::abs(vw)));
  }

  {  // gradient sanity on a small problem
    ControlProblem p(Mesh1D::uniform(50), svk, grid, 2e-4);
    p.objective.alpha = 2e-3;
    for (int i = 1; i < p.mesh.n_nodes(); ++i)
      p.u0[i - 1] = 0.05 * std::sin(kPi * p.mesh.nodes[i]);
    const ControlGrid xi = ControlGrid::zero(p.space, p.grid);
    const FdReport report = fd_check(p, xi, 1.0, 2, {1e-3, 1e-4}, 7);
    failures += check("adjoint gradient matches finite differences to 5e-2",
                      report.worst_best_rel <= 5e-2);
  }

  {  // Barzilai-Borwein on a concave quadratic surrogate
    Eigen::VectorXd target(3), curvature(3);
    target << 1.0, -2.0, 0.5;
    curvature << 0.7, 1.0, 1.6;
    OptimSurface surface;
    surface.value = [=](const OptimPoint& x) {
      const Eigen::VectorXd d = x.xi.col(0) - target;
      return -0.5 * d.dot((curvature.array() * d.array()).matrix());
    };
    surface.evaluate = [=](const OptimPoint& x) {
      const Eigen::VectorXd d = x.xi.col(0) - target;
      SurfaceEval e;
      e.J = -0.5 * d.dot((curvature.array() * d.array()).matrix());
      e.direction.xi = (-(curvature.array() * d.array())).matrix();
      e.direction.tau = 0.0;
      e.norm_xi = e.direction.xi.norm();
      return e;
    };
    surface.dot = [](const OptimPoint& a, const OptimPoint& b) {
      return a.xi.col(0).dot(b.xi.col(0)) + a.tau * b.tau;
    };
    OptimPoint x0;
    x0.xi = Eigen::VectorXd::Zero(3);
    OptimizerConfig cfg;
    cfg.stop_tol = 1e-9;
    cfg.max_iters = 30;
    const OptimizerReport r = optimize_on_surface(surface, x0, cfg);
    failures += check("BB ascent recovers the quadratic maximizer to 1e-8",
                      (r.final_point.xi.col(0) - target).norm() <= 1e-8);
  }

  {  // configuration round trip
    const RunConfig c = parse_config_text("dt = 0.01\nmodel = fung\n");
    const std::string once = serialize_config(c);
    const std::string twice = serialize_config(parse_config_text(once));
    failures += check("config serialization round trip is idempotent",
                      once == twice && c.dt == 0.01);
  }

  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: FAILURES PRESENT\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D damped elastodynamics with a volume constraint: forward "
               "simulation, adjoint solve, gradient verification and hybrid "
               "(control, switch-time) maximization of the boundary pressure"};
  app.require_subcommand(1);

  CommonArgs forward_args, adjoint_args, gradcheck_args, optimize_args;
  std::string forward_control, adjoint_control, gradcheck_control;
  double adjoint_tau = 0.0, gradcheck_tau = 0.0;
  int gradcheck_dirs = 5;

  CLI::App* fwd = app.add_subcommand("forward", "solve the state system");
  add_common(fwd, forward_args);
  fwd->add_option("--control", forward_control,
                  "control lattice file (default: zero control)");

  CLI::App* adj = app.add_subcommand("adjoint", "solve the adjoint system");
  add_common(adj, adjoint_args);
  adj->add_option("--control", adjoint_control, "control lattice file");
  adj->add_option("--tau", adjoint_tau, "switch time (default T/2)");

  CLI::App* grc =
      app.add_subcommand("gradcheck", "finite-difference gradient check");
  add_common(grc, gradcheck_args);
  grc->add_option("--control", gradcheck_control, "base control lattice file");
  grc->add_option("--tau", gradcheck_tau, "switch time (default T/5)");
  grc->add_option("--directions", gradcheck_dirs, "number of directions");

  CLI::App* opt =
      app.add_subcommand("optimize", "run the gradient ascent end to end");
  add_common(opt, optimize_args);

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fwd->parsed()) return run_forward(forward_args, forward_control);
    if (adj->parsed())
      return run_adjoint(adjoint_args, adjoint_control, adjoint_tau);
    if (grc->parsed())
      return run_gradcheck(gradcheck_args, gradcheck_control, gradcheck_tau,
                           gradcheck_dirs);
    if (opt->parsed()) return run_optimize(optimize_args);
    if (selftest->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
