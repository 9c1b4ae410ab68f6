#include "elastoc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace elastoc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct FieldTable {
  std::map<std::string, std::function<void(RunConfig&, const std::string&)>>
      setters;
  std::map<std::string, std::function<std::string(const RunConfig&)>> getters;
  std::vector<std::pair<std::string, std::vector<std::string>>> layout;

  void add_double(const std::string& key, double RunConfig::* member) {
    setters[key] = [key, member](RunConfig& c, const std::string& v) {
      std::size_t pos = 0;
      const double parsed = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("not a number");
      c.*member = parsed;
    };
    getters[key] = [member](const RunConfig& c) {
      return format_double(c.*member);
    };
  }
  void add_int(const std::string& key, int RunConfig::* member) {
    setters[key] = [key, member](RunConfig& c, const std::string& v) {
      std::size_t pos = 0;
      const int parsed = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("not an integer");
      c.*member = parsed;
    };
    getters[key] = [member](const RunConfig& c) {
      return std::to_string(c.*member);
    };
  }
  void add_enum(const std::string& key, std::string RunConfig::* member,
                std::vector<std::string> allowed) {
    setters[key] = [allowed, member](RunConfig& c, const std::string& v) {
      for (const auto& a : allowed)
        if (v == a) {
          c.*member = v;
          return;
        }
      std::string msg = "expected one of:";
      for (const auto& a : allowed) msg += " " + a;
      throw std::invalid_argument(msg);
    };
    getters[key] = [member](const RunConfig& c) { return c.*member; };
  }
  void add_profile(const std::string& key, InitialProfile RunConfig::* member) {
    setters[key] = [member](RunConfig& c, const std::string& v) {
      c.*member = InitialProfile::parse(v);
    };
    getters[key] = [member](const RunConfig& c) {
      return (c.*member).to_string();
    };
  }
};

const FieldTable& field_table() {
  static const FieldTable table = [] {
    FieldTable t;
    t.add_enum("model", &RunConfig::model, {"svk", "fung", "ogden"});
    t.add_double("lambda_L", &RunConfig::lambda_L);
    t.add_double("mu_L", &RunConfig::mu_L);
    t.add_double("fung_w0", &RunConfig::fung_w0);
    t.add_double("fung_beta", &RunConfig::fung_beta);
    t.add_double("fung_gamma", &RunConfig::fung_gamma);
    t.add_double("ogden_gamma", &RunConfig::ogden_gamma);
    t.add_double("alpha", &RunConfig::alpha);
    t.add_double("kappa", &RunConfig::kappa);
    t.add_double("g", &RunConfig::g);
    t.add_double("T", &RunConfig::T);
    t.add_double("dt", &RunConfig::dt);
    t.add_double("mesh_h", &RunConfig::mesh_h);
    t.add_double("omega_a", &RunConfig::omega_a);
    t.add_double("omega_b", &RunConfig::omega_b);
    t.add_enum("operator", &RunConfig::operator_kind, {"plain", "fiber"});
    t.add_enum("objective", &RunConfig::objective,
               {"pressure_at_tau", "pressure_dq"});
    t.add_double("eps", &RunConfig::eps);
    t.add_double("eps_tilde", &RunConfig::eps_tilde);
    t.add_profile("u0", &RunConfig::u0);
    t.add_profile("udot0", &RunConfig::udot0);
    t.add_double("newton_tol", &RunConfig::newton_tol);
    t.add_int("newton_max_iter", &RunConfig::newton_max_iter);
    t.add_enum("constraint", &RunConfig::constraint,
               {"bordered", "augmented_lagrangian", "off"});
    t.add_double("al_rho", &RunConfig::al_rho);
    t.add_double("al_tol", &RunConfig::al_tol);
    t.add_double("stop_tol", &RunConfig::stop_tol);
    t.add_int("max_iters", &RunConfig::max_iters);
    t.add_double("tau0", &RunConfig::tau0);
    t.add_double("tau_min", &RunConfig::tau_min);
    t.add_double("tau_max", &RunConfig::tau_max);
    t.add_double("armijo_factor", &RunConfig::armijo_factor);
    t.add_double("bb_step_min", &RunConfig::bb_step_min);
    t.add_double("bb_step_max", &RunConfig::bb_step_max);
    t.add_double("tau_metric_weight", &RunConfig::tau_metric_weight);
    t.setters["out_dir"] = [](RunConfig& c, const std::string& v) {
      c.out_dir = v;
    };
    t.getters["out_dir"] = [](const RunConfig& c) { return c.out_dir; };

    t.layout = {
        {"model",
         {"model", "lambda_L", "mu_L", "fung_w0", "fung_beta", "fung_gamma",
          "ogden_gamma"}},
        {"physics", {"alpha", "kappa", "g"}},
        {"time", {"T", "dt"}},
        {"mesh", {"mesh_h", "omega_a", "omega_b"}},
        {"control", {"operator"}},
        {"objective", {"objective", "eps", "eps_tilde"}},
        {"initial", {"u0", "udot0"}},
        {"solver",
         {"newton_tol", "newton_max_iter", "constraint", "al_rho", "al_tol"}},
        {"optimizer",
         {"stop_tol", "max_iters", "tau0", "tau_min", "tau_max",
          "armijo_factor", "bb_step_min", "bb_step_max",
          "tau_metric_weight"}},
        {"output", {"out_dir"}},
    };
    return t;
  }();
  return table;
}

void set_field(RunConfig& config, const std::string& key,
               const std::string& value, std::vector<std::string>& errors) {
  const FieldTable& t = field_table();
  const auto it = t.setters.find(key);
  if (it == t.setters.end()) {
    errors.push_back("unknown key '" + key + "'");
    return;
  }
  try {
    it->second(config, value);
  } catch (const std::exception& e) {
    errors.push_back("key '" + key + "': invalid value '" + value + "' (" +
                     e.what() + ")");
  }
}

void validate(const RunConfig& c, std::vector<std::string>& errors) {
  auto positive = [&](double v, const std::string& key) {
    if (!(v > 0.0)) errors.push_back("key '" + key + "': must be > 0");
  };
  positive(c.alpha, "alpha");
  positive(c.kappa, "kappa");
  positive(c.T, "T");
  positive(c.dt, "dt");
  positive(c.mesh_h, "mesh_h");
  if (!(c.omega_a >= 0.0 && c.omega_a < c.omega_b && c.omega_b <= 1.0))
    errors.push_back("keys 'omega_a'/'omega_b': need 0 <= a < b <= 1");
  if (c.model == "svk") {
    if (!(c.mu_L > 0.0)) errors.push_back("key 'mu_L': must be > 0");
    if (c.lambda_L < 0.0) errors.push_back("key 'lambda_L': must be >= 0");
  } else if (c.model == "fung") {
    if (!(c.fung_beta > 0.0)) errors.push_back("key 'fung_beta': must be > 0");
    if (!(c.fung_gamma > 0.0))
      errors.push_back("key 'fung_gamma': must be > 0");
    if (c.fung_w0 < 0.0) errors.push_back("key 'fung_w0': must be >= 0");
  }
}

}  // namespace

double InitialProfile::operator()(double x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Sine:
      return amplitude * std::sin(frequency * kPi * x);
    case Kind::Poly: {
      double acc = 0.0;
      double xp = 1.0;
      for (double c : coefficients) {
        xp *= x;
        acc += c * xp;
      }
      return acc;
    }
  }
  return 0.0;
}

std::string InitialProfile::to_string() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Sine:
      return "sine:" + format_double(amplitude) + "," +
             format_double(frequency);
    case Kind::Poly: {
      std::string s = "poly:";
      for (std::size_t i = 0; i < coefficients.size(); ++i)
        s += (i ? "," : "") + format_double(coefficients[i]);
      return s;
    }
  }
  return "zero";
}

InitialProfile InitialProfile::parse(const std::string& text) {
  InitialProfile p;
  const std::string t = trim(text);
  if (t == "zero") return p;
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(t.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(std::stod(trim(item)));
  }
  if (head == "sine") {
    if (args.empty() || args.size() > 2)
      throw std::invalid_argument("sine profile needs amp[,freq]");
    p.kind = Kind::Sine;
    p.amplitude = args[0];
    p.frequency = args.size() > 1 ? args[1] : 1.0;
    return p;
  }
  if (head == "poly") {
    if (args.empty()) throw std::invalid_argument("poly profile needs coefficients");
    p.kind = Kind::Poly;
    p.coefficients = args;
    return p;
  }
  throw std::invalid_argument("unknown profile '" + t + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        errors.push_back("line " + std::to_string(line_no) +
                         ": malformed section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected key = value");
      continue;
    }
    set_field(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
              errors);
  }
  validate(config, errors);
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: " + assignment);
  std::vector<std::string> errors;
  set_field(config, trim(assignment.substr(0, eq)),
            trim(assignment.substr(eq + 1)), errors);
  validate(config, errors);
  if (!errors.empty()) {
    std::string msg = "invalid override:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
}

std::string serialize_config(const RunConfig& config) {
  const FieldTable& t = field_table();
  std::string out;
  for (const auto& [section, keys] : t.layout) {
    out += "[" + section + "]\n";
    for (const auto& key : keys)
      out += key + " = " + t.getters.at(key)(config) + "\n";
    out += "\n";
  }
  return out;
}

StrainEnergyModel make_model(const RunConfig& config) {
  if (config.model == "svk")
    return StrainEnergyModel::saint_venant_kirchhoff(config.lambda_L,
                                                     config.mu_L);
  if (config.model == "fung")
    return StrainEnergyModel::fung(config.fung_w0, config.fung_beta,
                                   config.fung_gamma);
  return StrainEnergyModel::ogden(config.ogden_gamma);
}

ControlProblem make_problem(const RunConfig& config) {
  const int n_elements =
      std::max(1, static_cast<int>(std::lround(1.0 / config.mesh_h)));
  Mesh1D mesh = Mesh1D::uniform(n_elements, config.omega_a, config.omega_b);
  ControlProblem problem(std::move(mesh), make_model(config),
                         TimeGrid::make(config.T, config.dt), config.kappa);

  problem.op_kind = config.operator_kind == "fiber" ? OperatorKind::Fiber
                                                    : OperatorKind::Plain;

  problem.objective.alpha = config.alpha;
  if (config.objective == "pressure_dq") {
    problem.objective.phi1 = ObjectiveConfig::Phi1::PressureDifferenceQuotient;
    problem.objective.eps = config.eps >= 0.0 ? config.eps : config.dt;
    problem.objective.eps_tilde =
        config.eps_tilde >= 0.0 ? config.eps_tilde : 2.0 * config.dt / config.T;
  } else {
    problem.objective.phi1 = ObjectiveConfig::Phi1::PressureAtTau;
    problem.objective.eps = config.eps > 0.0 ? config.eps : 0.0;
    problem.objective.eps_tilde = config.eps_tilde > 0.0 ? config.eps_tilde : 0.0;
  }
  problem.objective.validate();

  const double g_value = config.g;
  problem.g = [g_value](double) { return g_value; };

  for (int i = 1; i < problem.mesh.n_nodes(); ++i) {
    const double x = problem.mesh.nodes[i];
    problem.u0[i - 1] = config.u0(x);
    problem.udot0[i - 1] = config.udot0(x);
  }

  problem.forward_opts.newton_tol = config.newton_tol;
  problem.forward_opts.newton_max_iter = config.newton_max_iter;
  problem.forward_opts.al_rho = config.al_rho;
  problem.forward_opts.al_tol = config.al_tol;
  if (config.constraint == "augmented_lagrangian")
    problem.forward_opts.constraint =
        ForwardOptions::Constraint::AugmentedLagrangian;
  else if (config.constraint == "off")
    problem.forward_opts.constraint = ForwardOptions::Constraint::Off;
  else
    problem.forward_opts.constraint = ForwardOptions::Constraint::Bordered;

  return problem;
}

OptimizerConfig make_optimizer_config(const RunConfig& config) {
  OptimizerConfig opt;
  opt.stop_tol = config.stop_tol;
  opt.max_iters = config.max_iters;
  opt.tau0 = config.tau0;
  opt.tau_min = config.tau_min;
  opt.tau_max = config.tau_max;
  opt.armijo_factor = config.armijo_factor;
  opt.bb_step_min = config.bb_step_min;
  opt.bb_step_max = config.bb_step_max;
  opt.tau_metric_weight = config.tau_metric_weight;
  return opt;
}

}  // namespace elastoc
