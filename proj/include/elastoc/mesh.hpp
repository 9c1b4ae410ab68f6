#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace elastoc {

/// P1 mesh of Omega = (0,1) with the Dirichlet boundary at x=0 and the
/// Neumann boundary at x=1 (outward normal +1). The control subdomain
/// omega = [control_a, control_b] is resolved by mesh nodes.
struct Mesh1D {
  Eigen::VectorXd nodes;    // strictly increasing, nodes[0]=0, nodes[last]=1
  double control_a = 0.75;  // omega = [a, b] within [0, 1]
  double control_b = 1.0;

  static Mesh1D uniform(int n_elements, double control_a = 0.75,
                        double control_b = 1.0);

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return n_nodes() - 1; }
  /// Free (non-Dirichlet) degrees of freedom: nodes 1..n-1.
  int n_free() const { return n_nodes() - 1; }
  int neumann_node() const { return n_nodes() - 1; }
  double element_length(int e) const { return nodes[e + 1] - nodes[e]; }
  /// Largest element length.
  double h() const;

  void validate() const;
};

/// Nodal values at the free nodes (homogeneous Dirichlet dof eliminated);
/// entry i corresponds to global node i+1.
using NodalField = Eigen::VectorXd;

/// Value of a free-node field at a global node (0 at the Dirichlet node).
inline double node_value(const NodalField& f, int global_node) {
  return global_node == 0 ? 0.0 : f[global_node - 1];
}

/// Piecewise-constant P1 gradient of a free-node field on element e.
inline double element_gradient(const Mesh1D& mesh, const NodalField& f,
                               int e) {
  return (node_value(f, e + 1) - node_value(f, e)) / mesh.element_length(e);
}

/// Nodes and elements carrying the control: nodes with x in [a, b] and
/// elements fully contained in [a, b]. All control integrals run over those
/// elements only, matching supp(xi) = omega.
struct ControlSpace {
  std::vector<int> omega_nodes;     // global node indices
  std::vector<int> omega_elements;  // element indices
  std::vector<int> node_to_local;   // global node -> local control dof or -1

  explicit ControlSpace(const Mesh1D& mesh);
  int n_dofs() const { return static_cast<int>(omega_nodes.size()); }
};

}  // namespace elastoc
