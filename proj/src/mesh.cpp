#include "elastoc/mesh.hpp"

#include <cmath>

namespace elastoc {

namespace {
constexpr double kNodeTol = 1e-12;
}

Mesh1D Mesh1D::uniform(int n_elements, double control_a, double control_b) {
  if (n_elements < 1)
    throw std::invalid_argument("mesh needs at least one element");
  Mesh1D mesh;
  mesh.nodes = Eigen::VectorXd::LinSpaced(n_elements + 1, 0.0, 1.0);
  mesh.control_a = control_a;
  mesh.control_b = control_b;
  mesh.validate();
  return mesh;
}

double Mesh1D::h() const {
  double h_max = 0.0;
  for (int e = 0; e < n_elements(); ++e)
    h_max = std::max(h_max, element_length(e));
  return h_max;
}

void Mesh1D::validate() const {
  if (n_nodes() < 2) throw std::invalid_argument("mesh needs >= 2 nodes");
  if (std::abs(nodes[0]) > kNodeTol || std::abs(nodes[n_nodes() - 1] - 1.0) > kNodeTol)
    throw std::invalid_argument("mesh must span [0, 1]");
  for (int i = 0; i + 1 < n_nodes(); ++i)
    if (nodes[i + 1] <= nodes[i])
      throw std::invalid_argument("mesh nodes must be strictly increasing");
  if (control_a < -kNodeTol || control_b > 1.0 + kNodeTol ||
      control_a >= control_b)
    throw std::invalid_argument("control window must satisfy 0 <= a < b <= 1");
}

ControlSpace::ControlSpace(const Mesh1D& mesh) {
  node_to_local.assign(mesh.n_nodes(), -1);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    if (mesh.nodes[i] >= mesh.control_a - kNodeTol &&
        mesh.nodes[i] <= mesh.control_b + kNodeTol) {
      node_to_local[i] = static_cast<int>(omega_nodes.size());
      omega_nodes.push_back(i);
    }
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (node_to_local[e] >= 0 && node_to_local[e + 1] >= 0)
      omega_elements.push_back(e);
  }
  if (omega_nodes.empty())
    throw std::invalid_argument("control window contains no mesh node");
}

}  // namespace elastoc
