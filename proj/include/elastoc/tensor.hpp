#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace elastoc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Hyperelastic constitutive law: W as a function of the Green-Saint-Venant
/// strain, together with its first two derivatives.
struct StrainEnergyModel {
  enum class Kind { SaintVenantKirchhoff, Fung, Ogden };

  Kind kind = Kind::SaintVenantKirchhoff;

  // Saint Venant-Kirchhoff: W = mu_L tr(E^2) + lambda_L/2 tr(E)^2
  double lambda_L = 0.0;  // >= 0
  double mu_L = 0.0;      // > 0

  // Fung: W = W0 + beta (exp(gamma tr(E^2)) - 1)
  double fung_w0 = 0.0;    // >= 0
  double fung_beta = 0.0;  // > 0

  // Ogden: W = tr((2E+I)^gamma - I); shared exponent field
  double gamma = 0.0;  // Fung: > 0, Ogden: any real

  static StrainEnergyModel saint_venant_kirchhoff(double lambda, double mu);
  static StrainEnergyModel fung(double w0, double beta, double gamma);
  static StrainEnergyModel ogden(double gamma);
};

/// Fourth-order tensor acting on symmetric d x d matrices, stored as an
/// m x m matrix in the orthonormal (Mandel) basis, m = d(d+1)/2.
class SymTensor4 {
 public:
  SymTensor4() = default;
  SymTensor4(int dim, Mat coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {}

  static SymTensor4 zero(int dim);
  static int mandel_size(int dim) { return dim * (dim + 1) / 2; }

  // Orthonormal coordinates: diagonal entries first, then sqrt(2)-scaled
  // off-diagonals, so that vec(A).dot(vec(B)) = A:B.
  static Vec sym_to_vec(const Mat& a);
  static Mat vec_to_sym(int dim, const Vec& v);

  int dim() const { return dim_; }
  const Mat& coeffs() const { return coeffs_; }
  Mat& coeffs() { return coeffs_; }

  /// Action on a symmetric matrix (the input is symmetrized).
  Mat apply(const Mat& h) const;

  /// Quadratic/bilinear form A : (this . B).
  double contract(const Mat& a, const Mat& b) const;

 private:
  int dim_ = 0;
  Mat coeffs_;
};

struct EnergyDerivatives {
  double W = 0.0;       // strain energy density
  Mat sigma_check;      // dW/dE, symmetric
  SymTensor4 d2W;       // d^2W/dE^2 on symmetric matrices
};

/// Phi(u) = I + grad_u.
Mat deformation_gradient(const Mat& grad_u);

/// E(u) = 1/2 (Phi^T Phi - I).
Mat green_strain(const Mat& grad_u);

/// E'(u).v = 1/2 (Phi(u)^T grad_v + grad_v^T Phi(u)).
Mat strain_linearization(const Mat& grad_u, const Mat& grad_v);

/// Determinant and cofactor matrix; for invertible A, cof A = det(A) A^{-T}.
std::pair<double, Mat> det_cof(const Mat& a);

/// Directional derivative of A -> cof(A) at A in direction H. Requires
/// det A != 0.
Mat cof_differential(const Mat& a, const Mat& h);

/// W, dW/dE and d^2W/dE^2 at a symmetric strain E.
EnergyDerivatives energy_and_derivatives(const StrainEnergyModel& model,
                                         const Mat& E);

/// sigma(grad u) = Phi(u) dW/dE(E(u)).
Mat sigma(const StrainEnergyModel& model, const Mat& grad_u);

/// sigma_L(grad u).grad v = grad_v Sigma(u) + Phi(u) d2W(E(u)).(E'(u).v).
Mat sigma_L_apply(const StrainEnergyModel& model, const Mat& grad_u,
                  const Mat& grad_v);

/// sigma_N(grad u).grad v, the cofactor linearization at Phi(u).
Mat sigma_N_apply(const Mat& grad_u, const Mat& grad_v);

/// 1D specialization used by the FEM assembly: all quantities reduce to
/// scalars with E = e, W = W(e), S = dW/dE, D2 = d^2W/dE^2.
struct ScalarEnergy {
  double W = 0.0;
  double S = 0.0;
  double D2 = 0.0;
};
ScalarEnergy scalar_energy(const StrainEnergyModel& model, double E);

}  // namespace elastoc
