#include "elastoc/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace elastoc {

struct TsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
};

TsvWriter::TsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open output file: " + path);
  }
  impl_->columns = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << (i ? "\t" : "") << columns[i];
  impl_->out << "\n";
}

TsvWriter::~TsvWriter() { delete impl_; }

void TsvWriter::row(const std::vector<double>& values) {
  if (values.size() != impl_->columns)
    throw std::logic_error("row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << (i ? "\t" : "") << format_full(values[i]);
  impl_->out << "\n";
}

std::string format_full(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

namespace {

std::vector<std::string> nodal_columns(const Mesh1D& mesh,
                                       const std::string& prefix) {
  std::vector<std::string> cols;
  for (int i = 0; i < mesh.n_nodes(); ++i)
    cols.push_back(prefix + std::to_string(i));
  return cols;
}

void append_nodal(std::vector<double>& row, const NodalField& f, int n_nodes) {
  for (int i = 0; i < n_nodes; ++i) row.push_back(node_value(f, i));
}

}  // namespace

void write_state_trajectory(const std::string& path, const Mesh1D& mesh,
                            const TimeGrid& grid,
                            const StateTrajectory& traj) {
  std::vector<std::string> cols = {"t"};
  for (const auto& c : nodal_columns(mesh, "u_")) cols.push_back(c);
  for (const auto& c : nodal_columns(mesh, "udot_")) cols.push_back(c);
  cols.push_back("pressure");
  cols.push_back("volume_residual");
  TsvWriter w(path, cols);
  for (int k = 0; k <= grid.steps; ++k) {
    std::vector<double> row = {grid.time(k)};
    append_nodal(row, traj.u[k], mesh.n_nodes());
    append_nodal(row, traj.udot[k], mesh.n_nodes());
    row.push_back(traj.pressure[k]);
    row.push_back(traj.volume_residual[k]);
    w.row(row);
  }
}

void write_pressure_trace(const std::string& path, const TimeGrid& grid,
                          const StateTrajectory& traj,
                          const Eigen::VectorXd& boundary_formula) {
  TsvWriter w(path, {"t", "pressure", "pressure_boundary_formula"});
  for (int k = 0; k <= grid.steps; ++k)
    w.row({grid.time(k), traj.pressure[k], boundary_formula[k]});
}

void write_adjoint_trajectory(const std::string& path, const Mesh1D& mesh,
                              const TimeGrid& grid,
                              const AdjointTrajectory& adj) {
  std::vector<std::string> cols = {"t"};
  for (const auto& c : nodal_columns(mesh, "zeta0_")) cols.push_back(c);
  for (const auto& c : nodal_columns(mesh, "zeta1_")) cols.push_back(c);
  cols.push_back("pi");
  TsvWriter w(path, cols);
  for (int k = 0; k <= grid.steps; ++k) {
    std::vector<double> row = {grid.time(k)};
    append_nodal(row, adj.zeta0[k], mesh.n_nodes());
    append_nodal(row, adj.zeta1[k], mesh.n_nodes());
    row.push_back(k < grid.steps ? adj.pi[k] : adj.pi[grid.steps - 1]);
    w.row(row);
  }
}

void write_control_grid(const std::string& path, const Mesh1D& mesh,
                        const ControlSpace& space, const TimeGrid& grid,
                        const ControlGrid& xi) {
  std::vector<std::string> cols = {"t"};
  for (int node : space.omega_nodes)
    cols.push_back("xi_x" + format_full(mesh.nodes[node]));
  TsvWriter w(path, cols);
  for (int k = 0; k < grid.steps; ++k) {
    std::vector<double> row = {grid.time(k)};
    for (int j = 0; j < space.n_dofs(); ++j) row.push_back(xi.values(j, k));
    w.row(row);
  }
}

ControlGrid read_control_grid(const std::string& path,
                              const ControlSpace& space,
                              const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open control file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty control file: " + path);
  ControlGrid xi;
  xi.values = Eigen::MatrixXd::Zero(space.n_dofs(), grid.steps);
  int k = 0;
  while (std::getline(in, line) && k < grid.steps) {
    std::istringstream row(line);
    double t;
    row >> t;
    for (int j = 0; j < space.n_dofs(); ++j) {
      if (!(row >> xi.values(j, k)))
        throw std::runtime_error("control file row " + std::to_string(k + 1) +
                                 " is too short");
    }
    ++k;
  }
  if (k != grid.steps)
    throw std::runtime_error("control file has " + std::to_string(k) +
                             " rows, expected " + std::to_string(grid.steps));
  return xi;
}

void write_nodal_snapshot(const std::string& path, const Mesh1D& mesh,
                          const NodalField& field) {
  TsvWriter w(path, {"x", "value"});
  for (int i = 0; i < mesh.n_nodes(); ++i)
    w.row({mesh.nodes[i], node_value(field, i)});
}

}  // namespace elastoc
