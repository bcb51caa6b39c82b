#include "drumhead/metric2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drumhead {

void MetricConfig::validate() const {
  if (boundary_samples < 64) throw std::invalid_argument("MetricConfig: boundary_samples must be >= 64");
  if (coarse_angles < 8) throw std::invalid_argument("MetricConfig: coarse_angles must be >= 8");
  if (refine_iters < 0) throw std::invalid_argument("MetricConfig: refine_iters must be >= 0");
}

SegmentIndex::SegmentIndex(Points polyline) : pts_(std::move(polyline)) {
  const Eigen::Index n = pts_.cols();
  if (n < 3) throw std::invalid_argument("SegmentIndex: polyline needs at least 3 points");
  const Eigen::Vector2d lo = pts_.rowwise().minCoeff();
  const Eigen::Vector2d hi = pts_.rowwise().maxCoeff();
  const Eigen::Vector2d extent = hi - lo;
  if (extent.maxCoeff() <= 0.0) throw std::invalid_argument("SegmentIndex: degenerate polyline");

  // About one segment per cell along the boundary.
  double perimeter = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) perimeter += (pts_.col((i + 1) % n) - pts_.col(i)).norm();
  cell_ = std::max(perimeter / double(n) * 2.0, extent.maxCoeff() / 512.0);
  nx_ = std::max(1, int(std::ceil(extent.x() / cell_)));
  ny_ = std::max(1, int(std::ceil(extent.y() / cell_)));
  origin_ = lo;

  auto cell_of = [&](double v, double o, int cells) {
    return std::clamp(int(std::floor((v - o) / cell_)), 0, cells - 1);
  };
  std::vector<std::vector<int>> buckets(std::size_t(nx_) * ny_);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Vector2d p = pts_.col(s), q = pts_.col((s + 1) % n);
    const int x0 = cell_of(std::min(p.x(), q.x()), origin_.x(), nx_);
    const int x1 = cell_of(std::max(p.x(), q.x()), origin_.x(), nx_);
    const int y0 = cell_of(std::min(p.y(), q.y()), origin_.y(), ny_);
    const int y1 = cell_of(std::max(p.y(), q.y()), origin_.y(), ny_);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) buckets[std::size_t(y) * nx_ + x].push_back(int(s));
  }
  cell_start_.assign(buckets.size() + 1, 0);
  for (std::size_t c = 0; c < buckets.size(); ++c)
    cell_start_[c + 1] = cell_start_[c] + int(buckets[c].size());
  cell_segments_.reserve(std::size_t(cell_start_.back()));
  for (const auto& b : buckets) cell_segments_.insert(cell_segments_.end(), b.begin(), b.end());
}

double SegmentIndex::segment_distance_sq(Eigen::Index seg, const Eigen::Vector2d& p) const {
  const Eigen::Vector2d a = pts_.col(seg);
  const Eigen::Vector2d b = pts_.col((seg + 1) % pts_.cols());
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).squaredNorm();
}

double SegmentIndex::distance(const Eigen::Vector2d& p) const {
  const double fx = (p.x() - origin_.x()) / cell_;
  const double fy = (p.y() - origin_.y()) / cell_;
  const int hx = std::clamp(int(std::floor(fx)), 0, nx_ - 1);
  const int hy = std::clamp(int(std::floor(fy)), 0, ny_ - 1);

  double best = std::numeric_limits<double>::infinity();
  const int max_ring = std::max({hx, nx_ - 1 - hx, hy, ny_ - 1 - hy});
  for (int k = 0; k <= max_ring; ++k) {
    const int x0 = hx - k, x1 = hx + k, y0 = hy - k, y1 = hy + k;
    for (int y = std::max(y0, 0); y <= std::min(y1, ny_ - 1); ++y) {
      const bool edge_row = (y == y0 || y == y1);
      for (int x = std::max(x0, 0); x <= std::min(x1, nx_ - 1); ++x) {
        if (!edge_row && x != x0 && x != x1) continue;
        const std::size_t c = std::size_t(y) * nx_ + x;
        for (int i = cell_start_[c]; i < cell_start_[c + 1]; ++i)
          best = std::min(best, segment_distance_sq(cell_segments_[std::size_t(i)], p));
      }
    }
    // Every unvisited cell lies beyond one of the box sides that still has cells behind it.
    double bound = std::numeric_limits<double>::infinity();
    if (x0 > 0) bound = std::min(bound, std::max(0.0, fx - x0) * cell_);
    if (x1 < nx_ - 1) bound = std::min(bound, std::max(0.0, x1 + 1 - fx) * cell_);
    if (y0 > 0) bound = std::min(bound, std::max(0.0, fy - y0) * cell_);
    if (y1 < ny_ - 1) bound = std::min(bound, std::max(0.0, y1 + 1 - fy) * cell_);
    if (best <= bound * bound) break;
  }
  return std::sqrt(best);
}

double directed_hausdorff(const Points& from, const SegmentIndex& to, double cutoff) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < from.cols(); ++i) {
    worst = std::max(worst, to.distance(from.col(i)));
    if (worst > cutoff) return worst;
  }
  return worst;
}

double hausdorff(const Points& boundary_a, const Points& boundary_b) {
  const SegmentIndex ia(boundary_a), ib(boundary_b);
  return std::max(directed_hausdorff(boundary_a, ib), directed_hausdorff(boundary_b, ia));
}

double shape_distance(const Shape& a, const Shape& b, const MetricConfig& cfg) {
  cfg.validate();
  return hausdorff(sample_boundary(a, cfg.boundary_samples), sample_boundary(b, cfg.boundary_samples));
}

namespace {

Points centered_boundary(const Shape& s, int samples) {
  Points pts = sample_boundary(s, samples);
  pts.colwise() -= centroid(s, samples);
  return pts;
}

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Hausdorff distance between A and B rotated by theta, both already centered.
// Rotating A by -theta against B's fixed index is equivalent to rotating B.
double rotated_distance(const SegmentIndex& ia, const SegmentIndex& ib, double theta, double cutoff) {
  const Eigen::Matrix2d rot = rotation(theta);
  const Points a_in_b = rot.transpose() * ia.polyline();
  const double h1 = directed_hausdorff(a_in_b, ib, cutoff);
  if (h1 > cutoff) return h1;
  const Points b_in_a = rot * ib.polyline();
  return std::max(h1, directed_hausdorff(b_in_a, ia, cutoff));
}

}  // namespace

double isometry_distance(const Shape& a, const Shape& b, const MetricConfig& cfg) {
  cfg.validate();
  const SegmentIndex ia(centered_boundary(a, cfg.boundary_samples));
  const Points pb = centered_boundary(b, cfg.boundary_samples);
  Points pr = pb;
  pr.row(1) *= -1.0;
  const SegmentIndex ib(pb), ir(pr);

  const double two_pi = 2.0 * std::numbers::pi;
  const double spacing = two_pi / cfg.coarse_angles;
  double overall = std::numeric_limits<double>::infinity();

  struct Candidate {
    const SegmentIndex* index;
    double theta;
    double value;
  };
  Candidate cands[2] = {{&ib, 0.0, overall}, {&ir, 0.0, overall}};
  for (auto& c : cands) {
    for (int t = 0; t < cfg.coarse_angles; ++t) {
      const double theta = spacing * t;
      const double v = rotated_distance(ia, *c.index, theta, overall);
      if (v < c.value) c = {c.index, theta, v};
      overall = std::min(overall, v);
    }
  }

  // Golden-section refinement around each variant's best grid angle.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (auto& c : cands) {
    if (!std::isfinite(c.value)) continue;
    double lo = c.theta - spacing, hi = c.theta + spacing;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = rotated_distance(ia, *c.index, x1, std::numeric_limits<double>::infinity());
    double f2 = rotated_distance(ia, *c.index, x2, std::numeric_limits<double>::infinity());
    for (int it = 0; it < cfg.refine_iters; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = rotated_distance(ia, *c.index, x1, std::numeric_limits<double>::infinity());
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = rotated_distance(ia, *c.index, x2, std::numeric_limits<double>::infinity());
      }
    }
    overall = std::min({overall, f1, f2});
  }
  return overall;
}

}  // namespace drumhead
