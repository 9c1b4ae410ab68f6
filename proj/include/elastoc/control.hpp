#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "elastoc/fem.hpp"
#include "elastoc/mesh.hpp"

namespace elastoc {

/// Uniform grid on [0, T] with steps*dt = T.
struct TimeGrid {
  double T = 0.0;
  double dt = 0.0;
  int steps = 0;

  static TimeGrid make(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0))
      throw std::invalid_argument("time grid requires T > 0 and dt > 0");
    TimeGrid g;
    g.T = T;
    g.dt = dt;
    g.steps = static_cast<int>(std::lround(T / dt));
    if (g.steps < 1 || std::abs(g.steps * dt - T) > 1e-9 * T)
      throw std::invalid_argument("time grid requires T to be a multiple of dt");
    return g;
  }

  double time(int k) const { return k * dt; }
};

/// Control values on the (omega-node, time-step) lattice: column k holds the
/// control on the interval [t_k, t_{k+1}), piecewise constant in time and
/// piecewise linear in space; zero outside omega by construction.
struct ControlGrid {
  Eigen::MatrixXd values;  // n_omega_dofs x steps

  static ControlGrid zero(const ControlSpace& space, const TimeGrid& grid) {
    ControlGrid c;
    c.values = Eigen::MatrixXd::Zero(space.n_dofs(), grid.steps);
    return c;
  }

  int steps() const { return static_cast<int>(values.cols()); }
  Eigen::VectorXd at_step(int k) const {
    return values.col(std::min(std::max(k, 0), steps() - 1));
  }
};

}  // namespace elastoc
