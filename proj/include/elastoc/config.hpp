#pragma once

#include <string>
#include <vector>

#include "elastoc/optimizer.hpp"
#include "elastoc/problem.hpp"

namespace elastoc {

/// Analytic initial-data profile: zero, amp*sin(freq*pi*x), or a polynomial
/// sum c_i x^i starting at i = 1; all vanish at the Dirichlet node.
struct InitialProfile {
  enum class Kind { Zero, Sine, Poly };
  Kind kind = Kind::Zero;
  double amplitude = 0.0;
  double frequency = 1.0;
  std::vector<double> coefficients;

  double operator()(double x) const;
  std::string to_string() const;
  static InitialProfile parse(const std::string& text);
};

/// Flat key-value run configuration; unset keys take the reference
/// experiment defaults.
struct RunConfig {
  // [model]
  std::string model = "svk";
  double lambda_L = 0.05;
  double mu_L = 0.05;
  double fung_w0 = 0.0;
  double fung_beta = 1.0;
  double fung_gamma = 1.0;
  double ogden_gamma = 1.0;

  // [physics]
  double alpha = 2e-3;
  double kappa = 2e-4;
  double g = 0.0;

  // [time]
  double T = 15.0;
  double dt = 0.02;

  // [mesh]
  double mesh_h = 0.01;
  double omega_a = 0.75;
  double omega_b = 1.0;

  // [control]
  std::string operator_kind = "plain";

  // [objective]
  std::string objective = "pressure_at_tau";
  double eps = -1.0;        // < 0: auto (0 at-tau; dt in dq mode)
  double eps_tilde = -1.0;  // < 0: auto (0 at-tau; 2 dt / T in dq mode)

  // [initial]
  InitialProfile u0;
  InitialProfile udot0;

  // [solver]
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  std::string constraint = "bordered";
  double al_rho = 1e4;
  double al_tol = 1e-10;

  // [optimizer]
  double stop_tol = 1e-10;
  int max_iters = 200;
  double tau0 = 0.0;
  double tau_min = 0.0;
  double tau_max = 0.0;
  double armijo_factor = 0.5;
  double bb_step_min = 1e-6;
  double bb_step_max = 1e2;
  double tau_metric_weight = 0.0;

  // [output]
  std::string out_dir = "out";
};

/// Parses an INI-style file: [sections] are cosmetic, keys are globally
/// unique, '#' and ';' start comments. Collects all field-level problems
/// into one error.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Applies one "key=value" override.
void apply_override(RunConfig& config, const std::string& assignment);

/// Canonical serialized form; serialize(parse(.)) is idempotent.
std::string serialize_config(const RunConfig& config);

/// Materializes the problem bundle (mesh, model, grid, objective, solver
/// options, initial data) and the optimizer settings.
ControlProblem make_problem(const RunConfig& config);
OptimizerConfig make_optimizer_config(const RunConfig& config);
StrainEnergyModel make_model(const RunConfig& config);

}  // namespace elastoc
