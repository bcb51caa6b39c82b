#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "drumhead/shape.hpp"

namespace drumhead {

struct MetricConfig {
  int boundary_samples = 1024;
  int coarse_angles = 360;
  int refine_iters = 40;

  void validate() const;
};

/// Nearest-segment queries against a closed polyline, bucketed on a uniform grid.
class SegmentIndex {
 public:
  explicit SegmentIndex(Points polyline);

  /// Euclidean distance from p to the closest segment.
  double distance(const Eigen::Vector2d& p) const;

  const Points& polyline() const { return pts_; }

 private:
  double segment_distance_sq(Eigen::Index seg, const Eigen::Vector2d& p) const;

  Points pts_;
  Eigen::Vector2d origin_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<int> cell_start_;  // CSR layout: cell_start_[c]..cell_start_[c+1] into cell_segments_
  std::vector<int> cell_segments_;
};

/// Largest distance from a point of `from` to the closed polyline indexed by `to`.
/// Returns early with a value > cutoff as soon as the running maximum exceeds it.
double directed_hausdorff(const Points& from, const SegmentIndex& to,
                          double cutoff = std::numeric_limits<double>::infinity());

/// Symmetric Hausdorff distance between two closed polylines, point-to-segment.
double hausdorff(const Points& boundary_a, const Points& boundary_b);

/// Hausdorff distance of the sampled boundaries in place (no isometry).
double shape_distance(const Shape& a, const Shape& b, const MetricConfig& cfg = {});

/// Hausdorff distance minimized over translations (centroid alignment), rotations and reflections.
double isometry_distance(const Shape& a, const Shape& b, const MetricConfig& cfg = {});

}  // namespace drumhead
