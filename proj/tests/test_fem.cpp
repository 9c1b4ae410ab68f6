#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "elastoc/fem.hpp"

using namespace elastoc;

namespace {

NodalField random_field(int n, std::mt19937& rng, double scale = 0.05) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  NodalField f(n);
  for (int i = 0; i < n; ++i) f[i] = dist(rng);
  return f;
}

const StrainEnergyModel kSvk =
    StrainEnergyModel::saint_venant_kirchhoff(0.05, 0.05);

}  // namespace

TEST_CASE("mass matrix") {
  const Mesh1D mesh = Mesh1D::uniform(10);
  const TriDiag m = assemble_mass(mesh);
  const double h = 0.1;

  // Interior row of the consistent P1 mass: h [1/6, 2/3, 1/6].
  CHECK(m.diag[3] == doctest::Approx(2.0 * h / 3.0));
  CHECK(m.lower[2] == doctest::Approx(h / 6.0));
  CHECK(m.upper[3] == doctest::Approx(h / 6.0));
  // Boundary node at x = 1 sees one element only.
  CHECK(m.diag[mesh.n_free() - 1] == doctest::Approx(h / 3.0));

  // Row sums reproduce int phi_i dx (hat-function masses before the test
  // function at the Dirichlet node is dropped).
  const Eigen::VectorXd row_sums = m.apply(Eigen::VectorXd::Ones(m.size()));
  CHECK(row_sums[3] == doctest::Approx(h));  // int phi_i over its support
  CHECK(row_sums[0] ==
        doctest::Approx(h - h / 6.0));  // misses the eliminated neighbor

  SUBCASE("two-node mesh") {
    const Mesh1D tiny = Mesh1D::uniform(1, 0.0, 1.0);
    const TriDiag m1 = assemble_mass(tiny);
    CHECK(m1.size() == 1);
    CHECK(m1.diag[0] == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("damping matrix") {
  const Mesh1D mesh = Mesh1D::uniform(100);
  const double kappa = 2e-4;
  const TriDiag a = assemble_damping(mesh, kappa);
  CHECK(a.upper[10] == doctest::Approx(-0.02));  // -kappa/h = -2e-4/0.01
  CHECK(a.diag[10] == doctest::Approx(0.04));

  // Constant fields are in the kernel away from the eliminated node.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.size());
  const Eigen::VectorXd av = a.apply(ones);
  for (int i = 1; i < a.size() - 1; ++i) CHECK(std::abs(av[i]) <= 1e-16);

  CHECK_THROWS_AS(assemble_damping(mesh, 0.0), std::invalid_argument);
}

TEST_CASE("assembled matrices are SPD after Dirichlet elimination") {
  const Mesh1D mesh = Mesh1D::uniform(17);
  for (const TriDiag& m :
       {assemble_mass(mesh), assemble_damping(mesh, 2e-4)}) {
    const Eigen::MatrixXd dense = m.dense();
    CHECK((dense - dense.transpose()).norm() <= 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("internal force") {
  const Mesh1D mesh = Mesh1D::uniform(20);
  std::mt19937 rng(51);

  SUBCASE("stress-free reference for SVK and Fung") {
    const NodalField zero = NodalField::Zero(mesh.n_free());
    CHECK(internal_force(mesh, kSvk, zero).isZero(1e-15));
    const auto fung = StrainEnergyModel::fung(0.1, 0.7, 1.3);
    CHECK(internal_force(mesh, fung, zero).isZero(1e-15));
  }

  SUBCASE("single-element closed form") {
    const Mesh1D tiny = Mesh1D::uniform(1, 0.0, 1.0);
    NodalField u(1);
    u << 0.13;
    const double du = 0.13;
    const double strain = du + 0.5 * du * du;
    const double expected = (1.0 + du) * 0.15 * strain;  // h and phi' cancel
    CHECK(internal_force(tiny, kSvk, u)[0] == doctest::Approx(expected));
  }

  SUBCASE("residual pairs with the energy differential") {
    for (int trial = 0; trial < 5; ++trial) {
      const NodalField u = random_field(mesh.n_free(), rng);
      const NodalField v = random_field(mesh.n_free(), rng, 1.0);
      const double h = 1e-6;
      const double fd = (elastic_energy(mesh, kSvk, u + h * v) -
                         elastic_energy(mesh, kSvk, u - h * v)) /
                        (2.0 * h);
      const double analytic = internal_force(mesh, kSvk, u).dot(v);
      CHECK(std::abs(fd - analytic) <=
            1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("tangent stiffness") {
  const Mesh1D mesh = Mesh1D::uniform(15);
  std::mt19937 rng(53);

  SUBCASE("at zero it is the scaled stiffness matrix") {
    const TriDiag k = tangent_stiffness(mesh, kSvk, NodalField::Zero(mesh.n_free()));
    TriDiag expected = assemble_stiffness(mesh);
    expected *= 0.15;  // 2 mu + lambda
    CHECK((k.dense() - expected.dense()).norm() <= 1e-14);
  }

  SUBCASE("matches the FD Jacobian of the internal force") {
    const NodalField u = random_field(mesh.n_free(), rng);
    const TriDiag k = tangent_stiffness(mesh, kSvk, u);
    const Eigen::MatrixXd dense = k.dense();
    CHECK((dense - dense.transpose()).norm() <= 1e-12 * dense.norm());

    Eigen::MatrixXd fd(mesh.n_free(), mesh.n_free());
    const double h = 1e-7;
    for (int j = 0; j < mesh.n_free(); ++j) {
      NodalField e = NodalField::Zero(mesh.n_free());
      e[j] = 1.0;
      fd.col(j) = (internal_force(mesh, kSvk, u + h * e) -
                   internal_force(mesh, kSvk, u - h * e)) /
                  (2.0 * h);
    }
    CHECK((fd - dense).norm() <= 1e-5 * std::max(1.0, dense.norm()));
  }
}

TEST_CASE("volume and its gradient") {
  const Mesh1D mesh = Mesh1D::uniform(25);
  std::mt19937 rng(59);

  SUBCASE("reference volume") {
    const VolumeResult v = volume_and_gradient(mesh, NodalField::Zero(mesh.n_free()));
    CHECK(v.value == doctest::Approx(1.0));
    NodalField expected = NodalField::Zero(mesh.n_free());
    expected[mesh.n_free() - 1] = 1.0;
    CHECK(v.gradient.isApprox(expected));
  }

  SUBCASE("V = 1 + u(1) against the quadrature of det") {
    NodalField u = random_field(mesh.n_free(), rng);
    u[mesh.n_free() - 1] = 0.2;
    const VolumeResult v = volume_and_gradient(mesh, u);
    CHECK(v.value == doctest::Approx(1.2).epsilon(1e-13));
  }

  SUBCASE("gradient matches FD of the volume") {
    const NodalField u = random_field(mesh.n_free(), rng);
    const VolumeResult v = volume_and_gradient(mesh, u);
    const double h = 1e-7;
    for (int j : {0, mesh.n_free() / 2, mesh.n_free() - 1}) {
      NodalField e = NodalField::Zero(mesh.n_free());
      e[j] = 1.0;
      const double fd = (volume_and_gradient(mesh, u + h * e).value -
                         volume_and_gradient(mesh, u - h * e).value) /
                        (2.0 * h);
      CHECK(std::abs(fd - v.gradient[j]) <= 1e-8);
    }
  }

  SUBCASE("discrete Piola identity: volume gradient is the boundary cofactor") {
    // In 1D cof(Phi(u)) n = 1 at x = 1; the assembled gradient must be the
    // unit covector there for any displacement.
    const NodalField u = random_field(mesh.n_free(), rng);
    const VolumeResult v = volume_and_gradient(mesh, u);
    NodalField expected = NodalField::Zero(mesh.n_free());
    expected[mesh.n_free() - 1] = 1.0;
    CHECK((v.gradient - expected).norm() <= 1e-14);
  }
}

TEST_CASE("control loads") {
  const Mesh1D mesh = Mesh1D::uniform(100);  // omega = [0.75, 1]
  const ControlSpace space(mesh);
  CHECK(space.n_dofs() == 26);
  CHECK(space.omega_nodes.front() == 75);
  CHECK(space.omega_elements.size() == 25);

  SUBCASE("zero control loads nothing") {
    const Eigen::VectorXd xi = Eigen::VectorXd::Zero(space.n_dofs());
    CHECK(control_load(mesh, space, xi, OperatorKind::Plain).isZero(0.0));
    CHECK(control_load(mesh, space, xi, OperatorKind::Fiber).isZero(0.0));
  }

  SUBCASE("plain load of a unit control is the hat-function mass over omega") {
    const Eigen::VectorXd xi = Eigen::VectorXd::Ones(space.n_dofs());
    const NodalField load = control_load(mesh, space, xi, OperatorKind::Plain);
    const double h = 0.01;
    for (int node = 76; node <= 99; ++node)
      CHECK(load[node - 1] == doctest::Approx(h));
    CHECK(load[75 - 1] == doctest::Approx(h / 2.0));   // left edge of omega
    CHECK(load[100 - 1] == doctest::Approx(h / 2.0));  // boundary node
    CHECK(load[40 - 1] == doctest::Approx(0.0));       // outside omega
  }

  SUBCASE("fiber load of a constant control telescopes to the omega edges") {
    const Eigen::VectorXd xi = 3.0 * Eigen::VectorXd::Ones(space.n_dofs());
    const NodalField load = control_load(mesh, space, xi, OperatorKind::Fiber);
    CHECK(load[75 - 1] == doctest::Approx(-3.0));
    CHECK(load[100 - 1] == doctest::Approx(3.0));
    for (int node = 76; node <= 99; ++node)
      CHECK(load[node - 1] == doctest::Approx(0.0));
  }

  SUBCASE("adjoint action is the transpose of the load") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (OperatorKind kind : {OperatorKind::Plain, OperatorKind::Fiber}) {
      Eigen::VectorXd xi(space.n_dofs());
      for (int i = 0; i < xi.size(); ++i) xi[i] = dist(rng);
      NodalField zeta(mesh.n_free());
      for (int i = 0; i < zeta.size(); ++i) zeta[i] = dist(rng);
      const double direct = control_load(mesh, space, xi, kind).dot(zeta);
      const double transposed =
          control_load_adjoint(mesh, space, zeta, kind).dot(xi);
      CHECK(direct == doctest::Approx(transposed).epsilon(1e-13));
    }
  }

  SUBCASE("control mass integrates |xi|^2 over omega") {
    const Eigen::VectorXd xi = Eigen::VectorXd::Ones(space.n_dofs());
    const TriDiag m = control_mass(mesh, space);
    CHECK(xi.dot(m.apply(xi)) == doctest::Approx(0.25).epsilon(1e-13));
  }
}

TEST_CASE("tridiagonal and bordered solves") {
  const Mesh1D mesh = Mesh1D::uniform(30);
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  TriDiag a = assemble_mass(mesh);
  a.axpy(0.3, assemble_stiffness(mesh));

  Eigen::VectorXd rhs(a.size());
  for (int i = 0; i < rhs.size(); ++i) rhs[i] = dist(rng);

  const Eigen::VectorXd x = TriDiagSolver(a).solve(rhs);
  CHECK((a.apply(x) - rhs).norm() <= 1e-12 * rhs.norm());

  Eigen::VectorXd b(a.size()), c(a.size());
  for (int i = 0; i < b.size(); ++i) {
    b[i] = dist(rng);
    c[i] = dist(rng);
  }
  const double r2 = dist(rng);
  const BorderedSolution s = solve_bordered(a, b, c, rhs, r2);
  CHECK((a.apply(s.x) + s.y * b - rhs).norm() <= 1e-11);
  CHECK(c.dot(s.x) == doctest::Approx(r2).epsilon(1e-10));
}
