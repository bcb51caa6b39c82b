#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "drumhead/rng.hpp"

namespace drumhead {

/// Closed polyline in the plane, one point per column.
template <typename Scalar>
using PointList = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

/// Star-shaped domain whose boundary is r(phi) = a + b exp(c0 + sum_k c_k cos(k phi) + s_k sin(k phi)).
///
/// The coefficient vector is laid out as (c0, c1, s1, c2, s2, ...), so a shape with
/// K harmonics has 2K+1 degrees of freedom. The offset `a` and scale `b` are carried
/// along but are never part of the coefficient vector.
template <typename Scalar>
class RadialShape {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr Scalar kDefaultOffset = Scalar(0.1);
  static constexpr Scalar kDefaultScale = Scalar(0.9);

  RadialShape() : RadialShape(Vector::Zero(1)) {}

  explicit RadialShape(Vector coefficients, Scalar offset = kDefaultOffset,
                       Scalar scale = kDefaultScale)
      : coeffs_(std::move(coefficients)), offset_(offset), scale_(scale) {
    if (coeffs_.size() < 1 || coeffs_.size() % 2 == 0)
      throw std::invalid_argument("RadialShape: coefficient count must be odd (2K+1)");
    if (!(offset_ > Scalar(0)) || !(scale_ > Scalar(0)))
      throw std::invalid_argument("RadialShape: offset a and scale b must be positive");
    if (!coeffs_.allFinite() || !std::isfinite(offset_) || !std::isfinite(scale_))
      throw std::invalid_argument("RadialShape: non-finite coefficient");
  }

  /// The unit disk with `harmonics` (all-zero) Fourier pairs.
  static RadialShape disk(int harmonics = 0) {
    return RadialShape(Vector::Zero(2 * harmonics + 1));
  }

  Eigen::Index dof() const { return coeffs_.size(); }
  int harmonics() const { return static_cast<int>((coeffs_.size() - 1) / 2); }

  const Vector& coefficients() const { return coeffs_; }
  Scalar offset() const { return offset_; }
  Scalar scale() const { return scale_; }

  Scalar c0() const { return coeffs_(0); }
  Scalar cos_coeff(int k) const { return coeffs_(2 * k - 1); }
  Scalar sin_coeff(int k) const { return coeffs_(2 * k); }

  /// Same a and b, new coefficients.
  RadialShape with_coefficients(Vector coefficients) const {
    return RadialShape(std::move(coefficients), offset_, scale_);
  }

  friend bool operator==(const RadialShape& l, const RadialShape& r) {
    return l.offset_ == r.offset_ && l.scale_ == r.scale_ && l.coeffs_.size() == r.coeffs_.size() &&
           l.coeffs_ == r.coeffs_;
  }

 private:
  Vector coeffs_;
  Scalar offset_;
  Scalar scale_;
};

using Shape = RadialShape<double>;
using Points = PointList<double>;

template <typename Scalar>
Scalar radius(const RadialShape<Scalar>& shape, Scalar phi) {
  using std::cos;
  using std::exp;
  using std::sin;
  Scalar exponent = shape.c0();
  for (int k = 1; k <= shape.harmonics(); ++k)
    exponent += shape.cos_coeff(k) * cos(Scalar(k) * phi) + shape.sin_coeff(k) * sin(Scalar(k) * phi);
  return shape.offset() + shape.scale() * exp(exponent);
}

/// Boundary points at phi_j = 2 pi j / n, j = 0..n-1.
template <typename Scalar>
PointList<Scalar> sample_boundary(const RadialShape<Scalar>& shape, Eigen::Index n) {
  if (n < 3) throw std::invalid_argument("sample_boundary: need at least 3 points");
  PointList<Scalar> pts(2, n);
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar phi = two_pi * Scalar(j) / Scalar(n);
    const Scalar r = radius(shape, phi);
    pts(0, j) = r * std::cos(phi);
    pts(1, j) = r * std::sin(phi);
  }
  return pts;
}

/// Enclosed area and area centroid by trapezoidal polar quadrature on a uniform phi grid.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> centroid(const RadialShape<Scalar>& shape, int quadrature_n = 1024) {
  if (quadrature_n < 16) throw std::invalid_argument("centroid: quadrature_n must be >= 16");
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r2 = 0, r3c = 0, r3s = 0;
  for (int j = 0; j < quadrature_n; ++j) {
    const Scalar phi = two_pi * Scalar(j) / Scalar(quadrature_n);
    const Scalar r = radius(shape, phi);
    r2 += r * r;
    r3c += r * r * r * std::cos(phi);
    r3s += r * r * r * std::sin(phi);
  }
  // The common factor dphi cancels between numerator and denominator.
  const Scalar half_area = r2 / Scalar(2);
  return {r3c / Scalar(3) / half_area, r3s / Scalar(3) / half_area};
}

template <typename Scalar>
Scalar area(const RadialShape<Scalar>& shape, int quadrature_n = 1024) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r2 = 0;
  for (int j = 0; j < quadrature_n; ++j) {
    const Scalar r = radius(shape, two_pi * Scalar(j) / Scalar(quadrature_n));
    r2 += r * r;
  }
  return r2 / Scalar(2) * two_pi / Scalar(quadrature_n);
}

/// Largest pairwise distance among n boundary samples.
template <typename Scalar>
Scalar diameter(const RadialShape<Scalar>& shape, Eigen::Index n = 256) {
  if (n < 64) throw std::invalid_argument("diameter: need at least 64 samples");
  const PointList<Scalar> pts = sample_boundary(shape, n);
  Scalar best = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) best = std::max(best, (pts.col(i) - pts.col(j)).squaredNorm());
  return std::sqrt(best);
}

/// Rotates the boundary by theta about the origin: r'(phi) = r(phi - theta).
template <typename Scalar>
RadialShape<Scalar> apply_rotation(const RadialShape<Scalar>& shape, Scalar theta) {
  typename RadialShape<Scalar>::Vector c = shape.coefficients();
  for (int k = 1; k <= shape.harmonics(); ++k) {
    const Scalar ck = shape.cos_coeff(k), sk = shape.sin_coeff(k);
    const Scalar cs = std::cos(Scalar(k) * theta), sn = std::sin(Scalar(k) * theta);
    c(2 * k - 1) = ck * cs - sk * sn;
    c(2 * k) = ck * sn + sk * cs;
  }
  return shape.with_coefficients(std::move(c));
}

/// Mirror image across the x-axis: r'(phi) = r(-phi).
template <typename Scalar>
RadialShape<Scalar> apply_reflection(const RadialShape<Scalar>& shape) {
  typename RadialShape<Scalar>::Vector c = shape.coefficients();
  for (int k = 1; k <= shape.harmonics(); ++k) c(2 * k) = -c(2 * k);
  return shape.with_coefficients(std::move(c));
}

/// Coefficient-space tangent of the rotation orbit, d(coeffs)/d(theta).
template <typename Scalar>
typename RadialShape<Scalar>::Vector rotation_tangent(const RadialShape<Scalar>& shape) {
  typename RadialShape<Scalar>::Vector g = RadialShape<Scalar>::Vector::Zero(shape.dof());
  for (int k = 1; k <= shape.harmonics(); ++k) {
    g(2 * k - 1) = -Scalar(k) * shape.sin_coeff(k);
    g(2 * k) = Scalar(k) * shape.cos_coeff(k);
  }
  return g;
}

/// c0 ~ U(-amp, amp); c_k, s_k ~ U(-amp/k, amp/k).
template <typename Scalar = double>
RadialShape<Scalar> random_shape(Rng& rng, int harmonics, Scalar amplitude) {
  if (amplitude < Scalar(0)) throw std::invalid_argument("random_shape: amplitude must be >= 0");
  typename RadialShape<Scalar>::Vector c(2 * harmonics + 1);
  c(0) = Scalar(rng.uniform(-double(amplitude), double(amplitude)));
  for (int k = 1; k <= harmonics; ++k) {
    const double bound = double(amplitude) / k;
    c(2 * k - 1) = Scalar(rng.uniform(-bound, bound));
    c(2 * k) = Scalar(rng.uniform(-bound, bound));
  }
  return RadialShape<Scalar>(std::move(c));
}

/// Adds U(-m/max(k,1), m/max(k,1)) to every coefficient of harmonic k.
template <typename Scalar>
RadialShape<Scalar> perturb(const RadialShape<Scalar>& shape, Rng& rng, Scalar magnitude) {
  if (!(magnitude > Scalar(0))) throw std::invalid_argument("perturb: magnitude must be positive");
  typename RadialShape<Scalar>::Vector c = shape.coefficients();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double k = std::max<double>(1.0, double((i + 1) / 2));
    const double bound = double(magnitude) / k;
    c(i) += Scalar(rng.uniform(-bound, bound));
  }
  return shape.with_coefficients(std::move(c));
}

}  // namespace drumhead
