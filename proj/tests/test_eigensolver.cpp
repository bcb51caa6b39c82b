#include <doctest.h>

#include <Eigen/Geometry>

#include <numbers>

#include "drumhead/eigensolver.hpp"
#include "drumhead/errors.hpp"
#include "drumhead/linalg.hpp"
#include "drumhead/rng.hpp"
#include "oracles.hpp"

using namespace drumhead;

namespace {

constexpr double kPi = std::numbers::pi;

Shape disk_of_radius(double r) {
  Shape::Vector c(1);
  c(0) = std::log((r - 0.1) / 0.9);
  return Shape(c);
}

Eigen::VectorXd eigs(const Shape& s, int nr, int ns, int n, EigenMethod method = EigenMethod::automatic) {
  EigenOptions opts;
  opts.method = method;
  return dirichlet_eigenvalues(assemble_p1(build_polar_mesh(s, nr, ns)), n, opts);
}

const std::vector<double>& bessel_eigs() {
  static const std::vector<double> v = oracle::disk_eigenvalues(40);
  return v;
}

}  // namespace

TEST_CASE("bessel oracle sanity") {
  CHECK(oracle::bessel_zero(0, 1) == doctest::Approx(2.4048255577).epsilon(1e-10));
  CHECK(oracle::bessel_zero(1, 1) == doctest::Approx(3.8317059702).epsilon(1e-10));
  CHECK(bessel_eigs()[0] == doctest::Approx(5.78319).epsilon(1e-5));
  CHECK(bessel_eigs()[1] == bessel_eigs()[2]);
}

TEST_CASE("element matrices of the unit right triangle") {
  const Eigen::Vector2d p0(0, 0), p1(1, 0), p2(0, 1);
  Eigen::Matrix3d expected;
  expected << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK((element_stiffness(p0, p1, p2) - 0.5 * expected).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::Matrix3d mass;
  mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  CHECK((element_mass(p0, p1, p2) - mass * (0.5 / 12)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("element stiffness is translation and rotation invariant") {
  Rng rng(1);
  const Eigen::Vector2d p0(0.1, 0.2), p1(1.3, 0.1), p2(0.4, 0.9);
  const Eigen::Rotation2Dd rot(rng.uniform(0, 6));
  const Eigen::Vector2d shift(rng.uniform(-3, 3), rng.uniform(-3, 3));
  CHECK((element_stiffness(p0, p1, p2) - element_stiffness(rot * p0 + shift, rot * p1 + shift, rot * p2 + shift))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("assembled matrices before elimination") {
  Rng rng(2);
  const Shape s = random_shape(rng, 3, 0.5);
  const TriMesh m = build_polar_mesh(s, 6, 18);
  const FemSystem full = assemble_p1(m, false);
  CHECK(full.size() == m.node_count());
  const Eigen::MatrixXd k = full.stiffness, mass = full.mass;
  CHECK((k * Eigen::VectorXd::Ones(k.cols())).cwiseAbs().maxCoeff() < 1e-12);
  double area = 0;
  for (Eigen::Index t = 0; t < m.triangle_count(); ++t) area += m.signed_area(t);
  CHECK(mass.sum() == doctest::Approx(area).epsilon(1e-13));
  CHECK(linalg::is_symmetric(k));
  CHECK(linalg::is_symmetric(mass));
  CHECK_NOTHROW(linalg::cholesky(mass));
}

TEST_CASE("Dirichlet elimination") {
  const TriMesh m = build_polar_mesh(Shape::disk(), 4, 12);
  const FemSystem sys = assemble_p1(m);
  CHECK(sys.size() == 1 + 3 * 12);
  for (std::size_t node = 0; node < sys.node_to_unknown.size(); ++node) {
    const int u = sys.node_to_unknown[node];
    CHECK((u < 0) == bool(m.boundary[node]));
    if (u >= 0) CHECK(sys.unknown_to_node[std::size_t(u)] == int(node));
  }
  const Eigen::MatrixXd k = sys.stiffness;
  CHECK(linalg::sym_eig(k).values(0) > 0);
  CHECK_NOTHROW(linalg::cholesky(Eigen::MatrixXd(sys.mass)));
}

TEST_CASE("degenerate triangles are rejected with their index") {
  TriMesh m = build_polar_mesh(Shape::disk(), 2, 6);
  m.nodes.col(m.node_index(1, 1)) = m.nodes.col(m.node_index(1, 0));
  CHECK_THROWS_AS(assemble_p1(m), NumericalError);
  CHECK_THROWS_WITH(assemble_p1(m), doctest::Contains("triangle 0"));
}

TEST_CASE("eigenvalue count bounds") {
  const FemSystem sys = assemble_p1(build_polar_mesh(Shape::disk(), 2, 6));
  CHECK_THROWS_AS(dirichlet_eigenvalues(sys, 0), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_eigenvalues(sys, 8), std::invalid_argument);
  CHECK(dirichlet_eigenvalues(sys, 7).size() == 7);
}

TEST_CASE("unit disk spectrum against Bessel zeros") {
  const Eigen::VectorXd l = eigs(Shape::disk(), 64, 128, 10);
  for (int i = 0; i < 10; ++i) CHECK(l(i) == doctest::Approx(bessel_eigs()[std::size_t(i)]).epsilon(0.01));
  CHECK(l(0) == doctest::Approx(5.78319).epsilon(0.01));
  CHECK(std::abs(l(2) - l(1)) / l(1) < 0.005);
  for (int i = 1; i < 10; ++i) CHECK(l(i - 1) <= l(i));
}

TEST_CASE("scaled disk and domain monotonicity") {
  const Eigen::VectorXd unit = eigs(Shape::disk(), 32, 64, 8);
  const Eigen::VectorXd big = eigs(disk_of_radius(1.9), 32, 64, 8);
  CHECK(big(0) == doctest::Approx(5.78319 / (1.9 * 1.9)).epsilon(0.01));
  // The mesh of a scaled disk is the scaled mesh, so the ratio is exact up to rounding.
  for (int i = 0; i < 8; ++i) {
    CHECK(big(i) * 1.9 * 1.9 == doctest::Approx(unit(i)).epsilon(1e-9));
    CHECK(big(i) < unit(i));
  }
}

TEST_CASE("dense and Krylov routes agree") {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Shape s = random_shape(rng, 3, 0.5);
    const Eigen::VectorXd d = eigs(s, 10, 20, 10, EigenMethod::dense);
    const Eigen::VectorXd k = eigs(s, 10, 20, 10, EigenMethod::krylov);
    CHECK(((d - k).array() / d.array()).abs().maxCoeff() < 1e-9);
  }
  // Every eigenvalue of a small system, including the top of the spectrum.
  const FemSystem sys = assemble_p1(build_polar_mesh(Shape::disk(1), 3, 8));
  EigenOptions dense, krylov;
  dense.method = EigenMethod::dense;
  krylov.method = EigenMethod::krylov;
  const int n = int(sys.size());
  const Eigen::VectorXd a = dirichlet_eigenvalues(sys, n, dense), b = dirichlet_eigenvalues(sys, n, krylov);
  CHECK(((a - b).array() / a.array()).abs().maxCoeff() < 1e-9);
}

TEST_CASE("dense route matches the generalized problem solved directly") {
  const FemSystem sys = assemble_p1(build_polar_mesh(Shape::disk(1), 4, 10));
  const Eigen::MatrixXd k = sys.stiffness, m = sys.mass;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(k, m, Eigen::EigenvaluesOnly);
  EigenOptions dense;
  dense.method = EigenMethod::dense;
  const Eigen::VectorXd l = dirichlet_eigenvalues(sys, 12, dense);
  for (int i = 0; i < 12; ++i) CHECK(l(i) == doctest::Approx(ges.eigenvalues()(i)).epsilon(1e-10));
}

TEST_CASE("first eigenvalue converges with order two") {
  const double exact = bessel_eigs()[0];
  std::vector<double> err;
  for (int nr : {32, 64, 128}) err.push_back(std::abs(eigs(Shape::disk(), nr, 2 * nr, 1)(0) - exact) / exact);
  CHECK(oracle::observed_order(err[0], err[1], err[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Weyl law for the unit disk") {
  const Eigen::VectorXd l = eigs(Shape::disk(), 64, 128, 40);
  const double weyl = 40.0 * 4 * kPi / (kPi * l(39));
  CHECK(std::abs(weyl - 1) < 0.25);
  for (int i = 0; i < 40; ++i) CHECK(l(i) == doctest::Approx(bessel_eigs()[std::size_t(i)]).epsilon(0.03));
}

TEST_CASE("green_spectrum") {
  const Spectrum mu = green_spectrum(Eigen::Vector3d(1, 2, 4));
  CHECK(mu(0) == 1.0);
  CHECK(mu(1) == 0.5);
  CHECK(mu(2) == 0.25);
  CHECK(green_spectrum(green_spectrum(Eigen::Vector3d(1, 2, 4))) == Eigen::VectorXd(Eigen::Vector3d(1, 2, 4)));
  CHECK_THROWS_AS(green_spectrum(Eigen::Vector2d(1, 0)), NumericalError);
  CHECK_THROWS_AS(green_spectrum(Eigen::Vector2d(-1, 2)), NumericalError);

  const Spectrum disk = green_spectrum(eigs(Shape::disk(), 64, 128, 1));
  CHECK(disk(0) == doctest::Approx(0.17292).epsilon(0.01));
}

TEST_CASE("spectrum is invariant under rotation") {
  Rng rng(4);
  const Shape s = random_shape(rng, 3, 0.4);
  const int nr = 24, ns = 48;
  const Eigen::VectorXd base = eigs(s, nr, ns, 6);
  // Exact sector rotation: the mesh is congruent, so only rounding differs.
  const Eigen::VectorXd sector = eigs(apply_rotation(s, 2 * kPi / ns), nr, ns, 6);
  CHECK(((sector - base).array() / base.array()).abs().maxCoeff() < 1e-10);
  for (double theta : {0.3, 1.234, 2.9}) {
    const Eigen::VectorXd r = eigs(apply_rotation(s, theta), nr, ns, 6);
    CHECK(((r - base).array() / base.array()).abs().maxCoeff() < 0.002);
  }
}

TEST_CASE("eigenvalues are deterministic") {
  Rng rng(5);
  const Shape s = random_shape(rng, 2, 0.5);
  CHECK(eigs(s, 20, 40, 8) == eigs(s, 20, 40, 8));
  CHECK(eigs(s, 8, 16, 8, EigenMethod::dense) == eigs(s, 8, 16, 8, EigenMethod::dense));
}
