#include "elastoc/fem.hpp"

#include <array>
#include <cmath>

namespace elastoc {

namespace {

// 2-point Gauss rule on the reference element [0,1].
constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2 sqrt(3))
constexpr std::array<double, 2> kGaussPoints = {0.5 - kGaussOffset,
                                                0.5 + kGaussOffset};
constexpr std::array<double, 2> kGaussWeights = {0.5, 0.5};

// Scatter an element pair contribution into the free-dof structures. Global
// node 0 is the eliminated Dirichlet dof.
inline void add_vec(NodalField& r, int global_node, double v) {
  if (global_node > 0) r[global_node - 1] += v;
}

struct ElementPair {
  double ll = 0.0, lr = 0.0, rl = 0.0, rr = 0.0;
};

void add_mat(TriDiag& m, int e, const ElementPair& p) {
  // element nodes e (left) and e+1 (right); free dofs e-1 and e.
  if (e > 0) {
    m.diag[e - 1] += p.ll;
    m.upper[e - 1] += p.lr;
    m.lower[e - 1] += p.rl;
  }
  m.diag[e] += p.rr;
}

}  // namespace

TriDiag assemble_mass(const Mesh1D& mesh) {
  TriDiag m = TriDiag::zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_length(e);
    add_mat(m, e, {h / 3.0, h / 6.0, h / 6.0, h / 3.0});
  }
  return m;
}

TriDiag assemble_stiffness(const Mesh1D& mesh) {
  TriDiag a = TriDiag::zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_length(e);
    add_mat(a, e, {1.0 / h, -1.0 / h, -1.0 / h, 1.0 / h});
  }
  return a;
}

TriDiag assemble_damping(const Mesh1D& mesh, double kappa) {
  if (kappa <= 0.0) throw std::invalid_argument("damping requires kappa > 0");
  TriDiag a = assemble_stiffness(mesh);
  a *= kappa;
  return a;
}

NodalField internal_force(const Mesh1D& mesh, const StrainEnergyModel& model,
                          const NodalField& u) {
  NodalField r = NodalField::Zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double du = element_gradient(mesh, u, e);
    const double strain = du + 0.5 * du * du;  // E = u' + u'^2/2
    const double s = scalar_energy(model, strain).S;
    // Sigma (E'(u).phi_i) = S (1+u') phi_i', constant on the element;
    // the element length cancels against phi_i' = +-1/h.
    const double flux = s * (1.0 + du);
    add_vec(r, e, -flux);
    add_vec(r, e + 1, flux);
  }
  return r;
}

TriDiag tangent_stiffness(const Mesh1D& mesh, const StrainEnergyModel& model,
                          const NodalField& u) {
  TriDiag k = TriDiag::zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_length(e);
    const double du = element_gradient(mesh, u, e);
    const double phi = 1.0 + du;
    const ScalarEnergy se = scalar_energy(model, du + 0.5 * du * du);
    // sigma_L(u').v' = (S + Phi^2 D2) v'
    const double c = (se.S + phi * phi * se.D2) / h;
    add_mat(k, e, {c, -c, -c, c});
  }
  return k;
}

double elastic_energy(const Mesh1D& mesh, const StrainEnergyModel& model,
                      const NodalField& u) {
  double w = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double du = element_gradient(mesh, u, e);
    w += mesh.element_length(e) * scalar_energy(model, du + 0.5 * du * du).W;
  }
  return w;
}

VolumeResult volume_and_gradient(const Mesh1D& mesh, const NodalField& u) {
  VolumeResult out;
  out.gradient = NodalField::Zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_length(e);
    const double du = element_gradient(mesh, u, e);
    out.value += h * (1.0 + du);
    // cof(Phi) = 1 in 1D: int cof phi_i' telescopes across elements.
    add_vec(out.gradient, e, -1.0);
    add_vec(out.gradient, e + 1, 1.0);
  }
  return out;
}

NodalField control_load(const Mesh1D& mesh, const ControlSpace& space,
                        const Eigen::VectorXd& xi, OperatorKind kind) {
  NodalField load = NodalField::Zero(mesh.n_free());
  for (int e : space.omega_elements) {
    const double h = mesh.element_length(e);
    const double xl = xi[space.node_to_local[e]];
    const double xr = xi[space.node_to_local[e + 1]];
    for (int q = 0; q < 2; ++q) {
      const double s = kGaussPoints[q];
      const double w = kGaussWeights[q] * h;
      const double xi_q = (1.0 - s) * xl + s * xr;
      if (kind == OperatorKind::Plain) {
        add_vec(load, e, w * xi_q * (1.0 - s));
        add_vec(load, e + 1, w * xi_q * s);
      } else {
        add_vec(load, e, w * xi_q * (-1.0 / h));
        add_vec(load, e + 1, w * xi_q * (1.0 / h));
      }
    }
  }
  return load;
}

Eigen::VectorXd control_load_adjoint(const Mesh1D& mesh,
                                     const ControlSpace& space,
                                     const NodalField& zeta,
                                     OperatorKind kind) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs());
  for (int e : space.omega_elements) {
    const double h = mesh.element_length(e);
    const double zl = node_value(zeta, e);
    const double zr = node_value(zeta, e + 1);
    const int jl = space.node_to_local[e];
    const int jr = space.node_to_local[e + 1];
    for (int q = 0; q < 2; ++q) {
      const double s = kGaussPoints[q];
      const double w = kGaussWeights[q] * h;
      const double test_q = (kind == OperatorKind::Plain)
                                ? (1.0 - s) * zl + s * zr
                                : (zr - zl) / h;
      out[jl] += w * test_q * (1.0 - s);
      out[jr] += w * test_q * s;
    }
  }
  return out;
}

NodalField assemble_load(const Mesh1D& mesh,
                         const std::function<double(double)>& f) {
  NodalField load = NodalField::Zero(mesh.n_free());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_length(e);
    const double x0 = mesh.nodes[e];
    for (int q = 0; q < 2; ++q) {
      const double s = kGaussPoints[q];
      const double w = kGaussWeights[q] * h;
      const double fq = f(x0 + s * h);
      add_vec(load, e, w * fq * (1.0 - s));
      add_vec(load, e + 1, w * fq * s);
    }
  }
  return load;
}

TriDiag control_mass(const Mesh1D& mesh, const ControlSpace& space) {
  TriDiag m = TriDiag::zero(space.n_dofs());
  for (int e : space.omega_elements) {
    const double h = mesh.element_length(e);
    const int jl = space.node_to_local[e];
    m.diag[jl] += h / 3.0;
    m.diag[jl + 1] += h / 3.0;
    m.upper[jl] += h / 6.0;
    m.lower[jl] += h / 6.0;
  }
  return m;
}

}  // namespace elastoc
