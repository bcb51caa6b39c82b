#include <doctest.h>

#include <numbers>

#include "drumhead/rng.hpp"
#include "drumhead/spectral_map.hpp"
#include "oracles.hpp"

using namespace drumhead;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralMapConfig mesh_cfg(int n, int rings, int sectors = 0) {
  SpectralMapConfig cfg;
  cfg.n_eigs = n;
  cfg.mesh_rings = rings;
  cfg.mesh_sectors = sectors ? sectors : 2 * rings;
  return cfg;
}

// Central difference of sigma along a coefficient direction.
Spectrum directional(const Shape& s, const Eigen::VectorXd& dir, double h, const SpectralMapConfig& cfg) {
  return (sigma(s.with_coefficients(s.coefficients() + h * dir), cfg) -
          sigma(s.with_coefficients(s.coefficients() - h * dir), cfg)) /
         (2 * h);
}

}  // namespace

TEST_CASE("resolution ladder") {
  CHECK(ladder_rings(1) == 48);
  CHECK(ladder_rings(2) == 48);
  CHECK(ladder_rings(10) == 104);
  CHECK(ladder_rings(40) == 4 * int(std::ceil(8 * std::sqrt(40.0))));
  const auto l = SpectralMapConfig::with_ladder(10);
  CHECK(l.mesh_rings == 104);
  CHECK(l.mesh_sectors == 208);
  SpectralMapConfig cfg;
  cfg.n_eigs = 3;
  cfg.mesh_rings = 10;
  CHECK(cfg.resolved().mesh_sectors == 20);
  CHECK(cfg.resolved().mesh_rings == 10);
}

TEST_CASE("config validation") {
  SpectralMapConfig cfg = mesh_cfg(3, 4);
  CHECK_NOTHROW(cfg.validate());
  cfg.fd_step = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = mesh_cfg(0, 4);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = mesh_cfg(5, 1, 3);  // one interior node only
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = mesh_cfg(1, 1, 3);
  CHECK_NOTHROW(cfg.validate());
  cfg.mesh_sectors = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sigma of the unit disk") {
  const Spectrum mu = sigma(Shape::disk(), mesh_cfg(3, 64));
  REQUIRE(mu.size() == 3);
  const double j0 = oracle::bessel_zero(0, 1), j1 = oracle::bessel_zero(1, 1);
  CHECK(mu(0) == doctest::Approx(1 / (j0 * j0)).epsilon(0.01));
  CHECK(mu(1) == doctest::Approx(1 / (j1 * j1)).epsilon(0.01));
  CHECK(mu(2) == doctest::Approx(1 / (j1 * j1)).epsilon(0.01));
  CHECK(mu(0) == doctest::Approx(0.17292).epsilon(0.01));
  CHECK(mu(1) == doctest::Approx(0.06811).epsilon(0.01));
}

TEST_CASE("sigma scaling law") {
  Shape::Vector c(1);
  c(0) = std::log(2.0);
  const auto cfg = mesh_cfg(5, 32);
  const Spectrum unit = sigma(Shape::disk(), cfg), big = sigma(Shape(c), cfg);
  for (int i = 0; i < 5; ++i) CHECK(big(i) == doctest::Approx(1.9 * 1.9 * unit(i)).epsilon(0.01));
}

TEST_CASE("sigma is deterministic and non-increasing") {
  Rng rng(1);
  const Shape s = random_shape(rng, 3, 0.5);
  const auto cfg = mesh_cfg(8, 16);
  const Spectrum a = sigma(s, cfg), b = sigma(s, cfg);
  CHECK(a == b);
  for (int i = 1; i < 8; ++i) CHECK(a(i) <= a(i - 1));
  CHECK((a.array() > 0).all());
  const Spectrum r = sigma(apply_rotation(s, 2 * kPi / 32), cfg);
  CHECK(((r - a).array() / a.array()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral_distance") {
  CHECK(spectral_distance(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2)) == 0.0);
  CHECK(spectral_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(spectral_distance(Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 1, 0)), std::invalid_argument);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd u(4), v(4), w(4);
    for (int k = 0; k < 4; ++k) {
      u(k) = rng.uniform(-1, 1);
      v(k) = rng.uniform(-1, 1);
      w(k) = rng.uniform(-1, 1);
    }
    CHECK(spectral_distance(u, w) <= spectral_distance(u, v) + spectral_distance(v, w) + 1e-15);
    CHECK(spectral_distance(u, v) == spectral_distance(v, u));
  }
}

TEST_CASE("jacobian of the unit disk") {
  const Shape disk = Shape::disk(1);
  const auto cfg = mesh_cfg(1, 48);
  const Jacobian j = jacobian_fd(disk, cfg);
  REQUIRE(j.values.rows() == 1);
  REQUIRE(j.values.cols() == 3);
  CHECK(j.evaluated_at == disk.coefficients());
  const double j01 = oracle::bessel_zero(0, 1);
  CHECK(j.values(0, 0) == doctest::Approx(2 * 1.0 * 0.9 / (j01 * j01)).epsilon(0.015));
  CHECK(j.values(0, 0) == doctest::Approx(0.31125).epsilon(0.015));
  CHECK(std::abs(j.values(0, 1)) < 2e-3);
  // The same holds at half the step.
  SpectralMapConfig half = cfg;
  half.fd_step /= 2;
  CHECK(std::abs(jacobian_fd(disk, half).values(0, 1)) < 2e-3);
}

TEST_CASE("jacobian columns are central differences") {
  Rng rng(3);
  const Shape s = random_shape(rng, 2, 0.4);
  const auto cfg = mesh_cfg(4, 12);
  const Jacobian j = jacobian_fd(s, cfg);
  for (Eigen::Index k = 0; k < s.dof(); ++k) {
    const Spectrum col = directional(s, Eigen::VectorXd::Unit(s.dof(), k), cfg.fd_step, cfg);
    CHECK((j.values.col(k) - col).norm() == 0.0);
  }
}

TEST_CASE("jacobian is deterministic across worker counts") {
  Rng rng(4);
  const Shape s = random_shape(rng, 2, 0.5);
  const auto cfg = mesh_cfg(5, 10);
  const Eigen::MatrixXd a = jacobian_fd(s, cfg, 1).values;
  CHECK(a == jacobian_fd(s, cfg, 1).values);
  CHECK(a == jacobian_fd(s, cfg, 3).values);
}

TEST_CASE("finite differences show second-order Richardson behaviour") {
  // Pick a shape and direction without nearby crossings: the disk's first mode is simple.
  Rng rng(5);
  const Shape s = perturb(Shape::disk(2), rng, 0.1);
  const auto cfg = mesh_cfg(1, 16);
  Eigen::VectorXd dir(5);
  for (int k = 0; k < 5; ++k) dir(k) = rng.uniform(-1, 1);
  dir.normalize();
  const double h = 0.02;
  const double d2h = directional(s, dir, 2 * h, cfg)(0), dh = directional(s, dir, h, cfg)(0),
               dh2 = directional(s, dir, h / 2, cfg)(0);
  const double ratio = (d2h - dh) / (dh - dh2);
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.0);
  CHECK(std::log2(ratio) >= 1.7);
}

TEST_CASE("rotation orbit lies in the numerical kernel of the jacobian") {
  Rng rng(6);
  const Shape s = random_shape(rng, 2, 0.4);
  const auto cfg = mesh_cfg(5, 24);
  const Eigen::MatrixXd j = jacobian_fd(s, cfg).values;
  const Eigen::VectorXd g = rotation_tangent(s);
  CHECK((j * g).norm() <= 1e-2 * j.norm() * g.norm());
}
