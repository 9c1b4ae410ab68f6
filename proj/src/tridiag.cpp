#include "elastoc/tridiag.hpp"

#include <cmath>

namespace elastoc {

Eigen::VectorXd TriDiag::apply(const Eigen::VectorXd& x) const {
  const int n = size();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i - 1] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

Eigen::MatrixXd TriDiag::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diag[i];
    if (i + 1 < n) {
      m(i + 1, i) = lower[i];
      m(i, i + 1) = upper[i];
    }
  }
  return m;
}

TriDiagSolver::TriDiagSolver(const TriDiag& a)
    : lower_(a.lower), diag_(a.diag), upper_(a.upper) {
  const int n = static_cast<int>(diag_.size());
  for (int i = 1; i < n; ++i) {
    if (diag_[i - 1] == 0.0)
      throw std::runtime_error("singular tridiagonal system");
    const double w = lower_[i - 1] / diag_[i - 1];
    diag_[i] -= w * upper_[i - 1];
    lower_[i - 1] = w;  // store the elimination multiplier
  }
  if (n > 0 && diag_[n - 1] == 0.0)
    throw std::runtime_error("singular tridiagonal system");
}

Eigen::VectorXd TriDiagSolver::solve(const Eigen::VectorXd& rhs) const {
  const int n = static_cast<int>(diag_.size());
  Eigen::VectorXd x = rhs;
  for (int i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
  x[n - 1] /= diag_[n - 1];
  for (int i = n - 2; i >= 0; --i)
    x[i] = (x[i] - upper_[i] * x[i + 1]) / diag_[i];
  return x;
}

BorderedSolution solve_bordered(const TriDiag& a, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c,
                                const Eigen::VectorXd& r1, double r2) {
  TriDiagSolver lu(a);
  const Eigen::VectorXd x1 = lu.solve(r1);
  const Eigen::VectorXd x2 = lu.solve(b);
  const double schur = c.dot(x2);
  if (schur == 0.0 || !std::isfinite(schur))
    throw std::runtime_error("singular bordered system");
  BorderedSolution s;
  s.y = (c.dot(x1) - r2) / schur;
  s.x = x1 - s.y * x2;
  return s;
}

}  // namespace elastoc
