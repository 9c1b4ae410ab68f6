#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace elastoc {

/// Symmetric-profile tridiagonal matrix over the free dofs.
struct TriDiag {
  Eigen::VectorXd lower;  // size n-1
  Eigen::VectorXd diag;   // size n
  Eigen::VectorXd upper;  // size n-1

  static TriDiag zero(int n) {
    TriDiag t;
    t.lower = Eigen::VectorXd::Zero(n - 1 < 0 ? 0 : n - 1);
    t.diag = Eigen::VectorXd::Zero(n);
    t.upper = Eigen::VectorXd::Zero(n - 1 < 0 ? 0 : n - 1);
    return t;
  }

  int size() const { return static_cast<int>(diag.size()); }

  TriDiag& operator+=(const TriDiag& o) {
    lower += o.lower;
    diag += o.diag;
    upper += o.upper;
    return *this;
  }
  TriDiag& operator*=(double s) {
    lower *= s;
    diag *= s;
    upper *= s;
    return *this;
  }
  friend TriDiag operator*(double s, TriDiag t) {
    t *= s;
    return t;
  }
  friend TriDiag operator+(TriDiag a, const TriDiag& b) {
    a += b;
    return a;
  }

  /// this += s * o
  void axpy(double s, const TriDiag& o) {
    lower += s * o.lower;
    diag += s * o.diag;
    upper += s * o.upper;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
};

/// Thomas factorization; the matrices assembled here are strictly
/// diagonally-dominant or SPD in the operating regime, so no pivoting.
class TriDiagSolver {
 public:
  explicit TriDiagSolver(const TriDiag& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::VectorXd lower_, diag_, upper_;
};

/// Solves the bordered saddle-point system
///   [ A  b ] [x]   [r1]
///   [ c^T 0] [y] = [r2]
/// by a Schur complement on the scalar row: two tridiagonal back-solves.
struct BorderedSolution {
  Eigen::VectorXd x;
  double y = 0.0;
};
BorderedSolution solve_bordered(const TriDiag& a, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c,
                                const Eigen::VectorXd& r1, double r2);

}  // namespace elastoc
