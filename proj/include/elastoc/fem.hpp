#pragma once

#include <functional>

#include "elastoc/mesh.hpp"
#include "elastoc/tensor.hpp"
#include "elastoc/tridiag.hpp"

namespace elastoc {

enum class OperatorKind { Plain, Fiber };

/// Consistent P1 mass matrix on the free dofs; SPD tridiagonal.
TriDiag assemble_mass(const Mesh1D& mesh);

/// Unit-coefficient P1 stiffness matrix on the free dofs.
TriDiag assemble_stiffness(const Mesh1D& mesh);

/// kappa times the stiffness matrix; the damping bilinear form. kappa > 0.
TriDiag assemble_damping(const Mesh1D& mesh, double kappa);

/// Residual of the strain-energy term: r_i = int Sigma(E(u)) (E'(u).phi_i) dx
/// by 2-point Gauss quadrature per element.
NodalField internal_force(const Mesh1D& mesh, const StrainEnergyModel& model,
                          const NodalField& u);

/// Jacobian of internal_force: K_ij = int (sigma_L(u').phi_j') phi_i' dx.
TriDiag tangent_stiffness(const Mesh1D& mesh, const StrainEnergyModel& model,
                          const NodalField& u);

/// Total strain energy int W(E(u)) dx; oracle pairing for the residual.
double elastic_energy(const Mesh1D& mesh, const StrainEnergyModel& model,
                      const NodalField& u);

/// V(u) = int det(Phi(u)) dx and g_i = int cof(Phi(u)) phi_i' dx; in 1D the
/// gradient is the unit covector at the Neumann node and V = 1 + u(1).
struct VolumeResult {
  double value = 0.0;
  NodalField gradient;
};
VolumeResult volume_and_gradient(const Mesh1D& mesh, const NodalField& u);

/// Load covector of the control operator: plain f(xi) = xi 1_omega gives
/// load_i = int_omega xi phi_i; the fiber operator (1D fiber direction 1)
/// gives load_i = int_omega xi phi_i'. xi holds control-dof values.
NodalField control_load(const Mesh1D& mesh, const ControlSpace& space,
                        const Eigen::VectorXd& xi, OperatorKind kind);

/// Transpose action: (f'(xi)* zeta)_j = int_omega (phi_j or phi_j') zeta dx
/// for each control dof j, with zeta a free-node field.
Eigen::VectorXd control_load_adjoint(const Mesh1D& mesh,
                                     const ControlSpace& space,
                                     const NodalField& zeta,
                                     OperatorKind kind);

/// Mass matrix of the control dofs over the omega elements; weights the
/// L2(omega) products in the cost and the Riesz representative.
TriDiag control_mass(const Mesh1D& mesh, const ControlSpace& space);

/// Consistent load of a body-force density: F_i = int f(x) phi_i dx by
/// 2-point Gauss quadrature.
NodalField assemble_load(const Mesh1D& mesh,
                         const std::function<double(double)>& f);

}  // namespace elastoc
