#include "elastoc/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace elastoc {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Index pairs of the Mandel ordering: diagonal first, then off-diagonals
// (1,2),(0,2),(0,1) for d=3, (0,1) for d=2.
void mandel_pair(int dim, int a, int& i, int& j) {
  if (a < dim) {
    i = j = a;
    return;
  }
  if (dim == 2) {
    i = 0;
    j = 1;
    return;
  }
  switch (a - dim) {
    case 0: i = 1; j = 2; return;
    case 1: i = 0; j = 2; return;
    default: i = 0; j = 1; return;
  }
}

}  // namespace

StrainEnergyModel StrainEnergyModel::saint_venant_kirchhoff(double lambda,
                                                            double mu) {
  require(mu > 0.0, "SaintVenantKirchhoff requires mu_L > 0");
  require(lambda >= 0.0, "SaintVenantKirchhoff requires lambda_L >= 0");
  StrainEnergyModel m;
  m.kind = Kind::SaintVenantKirchhoff;
  m.lambda_L = lambda;
  m.mu_L = mu;
  return m;
}

StrainEnergyModel StrainEnergyModel::fung(double w0, double beta,
                                          double gamma) {
  require(w0 >= 0.0, "Fung requires W0 >= 0");
  require(beta > 0.0, "Fung requires beta > 0");
  require(gamma > 0.0, "Fung requires gamma > 0");
  StrainEnergyModel m;
  m.kind = Kind::Fung;
  m.fung_w0 = w0;
  m.fung_beta = beta;
  m.gamma = gamma;
  return m;
}

StrainEnergyModel StrainEnergyModel::ogden(double gamma) {
  StrainEnergyModel m;
  m.kind = Kind::Ogden;
  m.gamma = gamma;
  return m;
}

SymTensor4 SymTensor4::zero(int dim) {
  const int m = mandel_size(dim);
  return SymTensor4(dim, Mat::Zero(m, m));
}

Vec SymTensor4::sym_to_vec(const Mat& a) {
  const int dim = static_cast<int>(a.rows());
  const double rt2 = std::sqrt(2.0);
  Vec v(mandel_size(dim));
  for (int k = 0; k < v.size(); ++k) {
    int i, j;
    mandel_pair(dim, k, i, j);
    v[k] = (i == j) ? a(i, i) : rt2 * 0.5 * (a(i, j) + a(j, i));
  }
  return v;
}

Mat SymTensor4::vec_to_sym(int dim, const Vec& v) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Mat a = Mat::Zero(dim, dim);
  for (int k = 0; k < v.size(); ++k) {
    int i, j;
    mandel_pair(dim, k, i, j);
    if (i == j) {
      a(i, i) = v[k];
    } else {
      a(i, j) = a(j, i) = inv_rt2 * v[k];
    }
  }
  return a;
}

Mat SymTensor4::apply(const Mat& h) const {
  return vec_to_sym(dim_, coeffs_ * sym_to_vec(h));
}

double SymTensor4::contract(const Mat& a, const Mat& b) const {
  return sym_to_vec(a).dot(coeffs_ * sym_to_vec(b));
}

Mat deformation_gradient(const Mat& grad_u) {
  return Mat::Identity(grad_u.rows(), grad_u.cols()) + grad_u;
}

Mat green_strain(const Mat& grad_u) {
  const Mat phi = deformation_gradient(grad_u);
  return 0.5 * (phi.transpose() * phi -
                Mat::Identity(grad_u.rows(), grad_u.cols()));
}

Mat strain_linearization(const Mat& grad_u, const Mat& grad_v) {
  const Mat phi = deformation_gradient(grad_u);
  return 0.5 * (phi.transpose() * grad_v + grad_v.transpose() * phi);
}

std::pair<double, Mat> det_cof(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  switch (d) {
    case 1:
      return {a(0, 0), Mat::Ones(1, 1)};
    case 2: {
      Mat c(2, 2);
      c << a(1, 1), -a(1, 0), -a(0, 1), a(0, 0);
      return {a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0), c};
    }
    case 3: {
      Mat c(3, 3);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
          const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
          c(i, j) = a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1);
        }
      }
      const double det =
          a(0, 0) * c(0, 0) + a(0, 1) * c(0, 1) + a(0, 2) * c(0, 2);
      return {det, c};
    }
    default:
      throw std::invalid_argument("det_cof: dimension must be 1, 2 or 3");
  }
}

Mat cof_differential(const Mat& a, const Mat& h) {
  auto [det, cof] = det_cof(a);
  if (det == 0.0)
    throw std::domain_error("singular deformation gradient");
  // D_A(cof).H = (1/det A)((cof A (x) cof A)H - cof A H^T cof A),
  // with (X (x) Y)H = (Y:H) X.
  const double cof_h = (cof.array() * h.array()).sum();
  return (cof_h * cof - cof * h.transpose() * cof) / det;
}

EnergyDerivatives energy_and_derivatives(const StrainEnergyModel& model,
                                         const Mat& E) {
  const int d = static_cast<int>(E.rows());
  const int m = SymTensor4::mandel_size(d);
  const Mat I = Mat::Identity(d, d);
  EnergyDerivatives out;

  switch (model.kind) {
    case StrainEnergyModel::Kind::SaintVenantKirchhoff: {
      const double trE = E.trace();
      out.W = model.mu_L * (E * E).trace() + 0.5 * model.lambda_L * trE * trE;
      out.sigma_check = 2.0 * model.mu_L * E + model.lambda_L * trE * I;
      const Vec vec_id = SymTensor4::sym_to_vec(I);
      Mat k = 2.0 * model.mu_L * Mat::Identity(m, m) +
              model.lambda_L * vec_id * vec_id.transpose();
      out.d2W = SymTensor4(d, std::move(k));
      return out;
    }
    case StrainEnergyModel::Kind::Fung: {
      const double g = model.gamma;
      const double e = std::exp(g * (E * E).trace());
      out.W = model.fung_w0 + model.fung_beta * (e - 1.0);
      out.sigma_check = 2.0 * g * model.fung_beta * e * E;
      const Vec vec_e = SymTensor4::sym_to_vec(E);
      Mat k = model.fung_beta * e *
              (2.0 * g * Mat::Identity(m, m) +
               4.0 * g * g * vec_e * vec_e.transpose());
      out.d2W = SymTensor4(d, std::move(k));
      return out;
    }
    case StrainEnergyModel::Kind::Ogden: {
      const double g = model.gamma;
      Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (E + E.transpose()));
      const Vec mu = eig.eigenvalues();
      const Mat V = eig.eigenvectors();
      for (int i = 0; i < d; ++i) {
        if (1.0 + 2.0 * mu[i] <= 0.0)
          throw std::runtime_error("invalid Ogden state");
      }
      auto f = [g](double m_) { return 2.0 * g * std::pow(1.0 + 2.0 * m_, g - 1.0); };
      auto fp = [g](double m_) {
        return 4.0 * g * (g - 1.0) * std::pow(1.0 + 2.0 * m_, g - 2.0);
      };
      out.W = 0.0;
      out.sigma_check = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        out.W += std::pow(1.0 + 2.0 * mu[i], g) - 1.0;
        out.sigma_check += f(mu[i]) * V.col(i) * V.col(i).transpose();
      }
      // d(Sigma)/dE in the eigenbasis: divided differences of f, with the
      // confluent limit f'(mu) at (nearly) repeated eigenvalues.
      Mat k = Mat::Zero(m, m);
      const double rt2_inv = 1.0 / std::sqrt(2.0);
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          double gij;
          if (std::abs(mu[i] - mu[j]) <= 1e-10) {
            gij = fp(0.5 * (mu[i] + mu[j]));
          } else {
            gij = (f(mu[i]) - f(mu[j])) / (mu[i] - mu[j]);
          }
          Mat basis = V.col(i) * V.col(j).transpose();
          if (i != j)
            basis = rt2_inv * (basis + basis.transpose().eval());
          const Vec vb = SymTensor4::sym_to_vec(basis);
          k += gij * vb * vb.transpose();
        }
      }
      out.d2W = SymTensor4(d, std::move(k));
      return out;
    }
  }
  throw std::logic_error("unreachable strain-energy kind");
}

Mat sigma(const StrainEnergyModel& model, const Mat& grad_u) {
  const Mat E = green_strain(grad_u);
  return deformation_gradient(grad_u) *
         energy_and_derivatives(model, E).sigma_check;
}

Mat sigma_L_apply(const StrainEnergyModel& model, const Mat& grad_u,
                  const Mat& grad_v) {
  const Mat E = green_strain(grad_u);
  const EnergyDerivatives ed = energy_and_derivatives(model, E);
  const Mat dE = strain_linearization(grad_u, grad_v);
  return grad_v * ed.sigma_check +
         deformation_gradient(grad_u) * ed.d2W.apply(dE);
}

Mat sigma_N_apply(const Mat& grad_u, const Mat& grad_v) {
  return cof_differential(deformation_gradient(grad_u), grad_v);
}

ScalarEnergy scalar_energy(const StrainEnergyModel& model, double E) {
  ScalarEnergy out;
  switch (model.kind) {
    case StrainEnergyModel::Kind::SaintVenantKirchhoff: {
      out.W = (model.mu_L + 0.5 * model.lambda_L) * E * E;
      out.S = (2.0 * model.mu_L + model.lambda_L) * E;
      out.D2 = 2.0 * model.mu_L + model.lambda_L;
      return out;
    }
    case StrainEnergyModel::Kind::Fung: {
      const double g = model.gamma;
      const double e = std::exp(g * E * E);
      out.W = model.fung_w0 + model.fung_beta * (e - 1.0);
      out.S = 2.0 * g * model.fung_beta * e * E;
      out.D2 = model.fung_beta * e * (2.0 * g + 4.0 * g * g * E * E);
      return out;
    }
    case StrainEnergyModel::Kind::Ogden: {
      const double g = model.gamma;
      const double q = 1.0 + 2.0 * E;
      if (q <= 0.0) throw std::runtime_error("invalid Ogden state");
      out.W = std::pow(q, g) - 1.0;
      out.S = 2.0 * g * std::pow(q, g - 1.0);
      out.D2 = 4.0 * g * (g - 1.0) * std::pow(q, g - 2.0);
      return out;
    }
  }
  throw std::logic_error("unreachable strain-energy kind");
}

}  // namespace elastoc
