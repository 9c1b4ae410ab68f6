#pragma once

#include <string>
#include <vector>

#include "elastoc/adjoint.hpp"
#include "elastoc/control.hpp"

namespace elastoc {

/// Tab-separated table writer with a header row; values carry full double
/// precision.
class TsvWriter {
 public:
  explicit TsvWriter(const std::string& path,
                     const std::vector<std::string>& columns);
  ~TsvWriter();
  TsvWriter(const TsvWriter&) = delete;
  TsvWriter& operator=(const TsvWriter&) = delete;

  void row(const std::vector<double>& values);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_full(double v);

/// One record per step: t, nodal u (all mesh nodes), nodal udot, the
/// multiplier pressure and the volume residual.
void write_state_trajectory(const std::string& path, const Mesh1D& mesh,
                            const TimeGrid& grid, const StateTrajectory& traj);

/// t, multiplier pressure, boundary-formula pressure.
void write_pressure_trace(const std::string& path, const TimeGrid& grid,
                          const StateTrajectory& traj,
                          const Eigen::VectorXd& boundary_formula);

/// Mirrors the forward format: t, zeta0, zeta1 (all mesh nodes), pi.
void write_adjoint_trajectory(const std::string& path, const Mesh1D& mesh,
                              const TimeGrid& grid,
                              const AdjointTrajectory& adj);

/// t_k plus one column per control node.
void write_control_grid(const std::string& path, const Mesh1D& mesh,
                        const ControlSpace& space, const TimeGrid& grid,
                        const ControlGrid& xi);

/// Reads a lattice produced by write_control_grid.
ControlGrid read_control_grid(const std::string& path,
                              const ControlSpace& space, const TimeGrid& grid);

/// x, value pairs of a nodal field including the Dirichlet node.
void write_nodal_snapshot(const std::string& path, const Mesh1D& mesh,
                          const NodalField& field);

}  // namespace elastoc
