#include <doctest.h>

#include <numbers>

#include "drumhead/metric2d.hpp"
#include "drumhead/rng.hpp"
#include "oracles.hpp"

using namespace drumhead;

namespace {

constexpr double kPi = std::numbers::pi;

Points circle(double r, int n, Eigen::Vector2d center = Eigen::Vector2d::Zero()) {
  Points p(2, n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2 * kPi * j / n;
    p.col(j) = center + r * Eigen::Vector2d(std::cos(phi), std::sin(phi));
  }
  return p;
}

Shape disk_of_radius(double r) {
  Shape::Vector c(1);
  c(0) = std::log((r - 0.1) / 0.9);
  return Shape(c);
}

// Cheaper settings for the bulk property loops.
MetricConfig fast() {
  MetricConfig cfg;
  cfg.boundary_samples = 256;
  cfg.coarse_angles = 90;
  cfg.refine_iters = 30;
  return cfg;
}

}  // namespace

TEST_CASE("hausdorff analytic cases") {
  const Points unit = circle(1.0, 1024);
  CHECK(hausdorff(unit, unit) == 0.0);
  CHECK(hausdorff(unit, circle(1.5, 1024)) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(std::abs(hausdorff(unit, circle(1.5, 1024)) - 0.5) < 1e-3);
  CHECK(std::abs(hausdorff(unit, circle(1.0, 1024, {0.3, 0.0})) - 0.3) < 1e-3);
}

TEST_CASE("hausdorff is symmetric and matches the brute-force oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Points a = sample_boundary(random_shape(rng, 3, 0.5), 200);
    Points b = sample_boundary(random_shape(rng, 3, 0.5), 150);
    b.row(0).array() += rng.uniform(-0.5, 0.5);
    const double h = hausdorff(a, b);
    CHECK(h == doctest::Approx(oracle::hausdorff(a, b)).epsilon(1e-12));
    CHECK(h == hausdorff(b, a));
  }
}

TEST_CASE("SegmentIndex nearest distance matches brute force") {
  Rng rng(2);
  const Points poly = sample_boundary(random_shape(rng, 4, 0.6), 300);
  const SegmentIndex index(poly);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::Vector2d p(rng.uniform(-6, 6), rng.uniform(-6, 6));
    double best = INFINITY;
    for (Eigen::Index j = 0; j < poly.cols(); ++j)
      best = std::min(best, oracle::point_segment(p, poly.col(j), poly.col((j + 1) % poly.cols())));
    CHECK(index.distance(p) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("directed hausdorff and cutoff") {
  const Points small = circle(1.0, 256), big = circle(2.0, 256);
  const SegmentIndex big_index(big), small_index(small);
  // Every point of the small circle is 1 from the big one, and vice versa.
  CHECK(directed_hausdorff(small, big_index) == doctest::Approx(1.0).epsilon(1e-3));
  // A half-disk arc against the full circle: asymmetric.
  Points arc(2, 128);
  for (int j = 0; j < 128; ++j) arc.col(j) = Eigen::Vector2d(std::cos(kPi * j / 127), std::sin(kPi * j / 127));
  const SegmentIndex arc_index(arc);
  CHECK(directed_hausdorff(arc, small_index) < 1e-3);
  CHECK(directed_hausdorff(small, arc_index) > 0.9);
  // Early exit reports something above the cutoff.
  CHECK(directed_hausdorff(small, big_index, 0.5) > 0.5);
}

TEST_CASE("degenerate polylines are rejected") {
  Points same = Points::Zero(2, 5);
  CHECK_THROWS_AS(hausdorff(same, circle(1, 8)), std::invalid_argument);
  CHECK_THROWS_AS(SegmentIndex(Points::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("MetricConfig validation") {
  MetricConfig cfg;
  cfg.boundary_samples = 63;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.coarse_angles = 7;
  CHECK_THROWS_AS(isometry_distance(Shape::disk(), Shape::disk(), cfg), std::invalid_argument);
  CHECK_NOTHROW(MetricConfig{}.validate());
}

TEST_CASE("shape_distance of concentric disks") {
  CHECK(shape_distance(Shape::disk(), Shape::disk()) == 0.0);
  CHECK(std::abs(shape_distance(Shape::disk(), disk_of_radius(1.5)) - 0.5) < 1e-3);
}

TEST_CASE("isometry_distance on isometric copies") {
  Rng rng(3);
  const Shape s = random_shape(rng, 3, 0.5);
  CHECK(isometry_distance(s, s) < 1e-6);
  CHECK(isometry_distance(s, apply_rotation(s, 0.7)) < 5e-3);
  CHECK(isometry_distance(s, apply_reflection(s)) < 5e-3);
  CHECK(isometry_distance(s, apply_reflection(apply_rotation(s, 2.1))) < 5e-3);
  CHECK(std::abs(isometry_distance(Shape::disk(), disk_of_radius(1.5)) - 0.5) < 2e-3);
}

TEST_CASE("hausdorff sees a pure translation") {
  Rng rng(4);
  const Shape s = random_shape(rng, 2, 0.4);
  const Points a = sample_boundary(s, 1024);
  Points shifted = a;
  shifted.row(0).array() += 0.2;
  CHECK(hausdorff(a, shifted) > 0.19);
}

TEST_CASE("isometry_distance symmetry and invariance") {
  Rng rng(5);
  const MetricConfig cfg = fast();
  for (int i = 0; i < 100; ++i) {
    const Shape a = random_shape(rng, 2, 0.5);
    const Shape b = perturb(a, rng, 0.1);
    const double ab = isometry_distance(a, b, cfg);
    CHECK(std::abs(ab - isometry_distance(b, a, cfg)) < 1e-3);
    if (i < 20) CHECK(std::abs(ab - isometry_distance(a, apply_rotation(b, rng.uniform(0, 2 * kPi)), cfg)) < 1e-3);
  }
}

TEST_CASE("isometry_distance is bounded below by the diameter gap") {
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    const Shape a = random_shape(rng, 3, 0.5), b = random_shape(rng, 3, 0.5);
    const double gap = std::abs(diameter(a, 512) - diameter(b, 512)) / 2;
    CHECK(isometry_distance(a, b, fast()) >= gap - 1e-3);
  }
}

TEST_CASE("hausdorff converges under sample refinement") {
  Rng rng(7);
  const Shape a = random_shape(rng, 3, 0.5), b = random_shape(rng, 3, 0.5);
  const double fine = hausdorff(sample_boundary(a, 16384), sample_boundary(b, 16384));
  // Chord error is second order in the sample spacing.
  for (int n = 256; n <= 8192; n *= 2)
    CHECK(std::abs(hausdorff(sample_boundary(a, n), sample_boundary(b, n)) - fine) <= 100.0 / (double(n) * n));
}
