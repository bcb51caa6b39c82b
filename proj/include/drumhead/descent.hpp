#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "drumhead/metric2d.hpp"
#include "drumhead/spectral_map.hpp"

namespace drumhead {

enum class FlowMethod { pseudoinverse, gradient };

enum class Outcome { both_match, shape_only_match, spectrum_only_match, neither_match };

enum class StopReason { spectrum_converged, step_underflow, iteration_cap, error };

std::string_view to_string(FlowMethod m);
std::string_view to_string(Outcome o);
std::string_view to_string(StopReason r);
FlowMethod parse_flow_method(std::string_view s);
Outcome parse_outcome(std::string_view s);

/// Only a run where both shape and spectrum match counts as a success.
constexpr bool is_success(Outcome o) { return o == Outcome::both_match; }

struct DescentConfig {
  double eps_shape = 0.005;
  double eps_spectrum = 3.1622776601683795e-5;  // sqrt(1e-9)
  double grow = 1.1;
  double shrink = 0.7;
  double initial_step = 0.01;
  double min_step = 1e-9;
  int max_iters = 5000;
  FlowMethod method = FlowMethod::pseudoinverse;
  double pinv_rel_tol = 1e-8;
  bool project_gauge = true;  // remove the rotation-orbit direction from the Jacobian's domain
  bool record_trace = true;
  MetricConfig metric;

  void validate() const;
};

struct TracePoint {
  int iter;
  double t;
  double step;
  double spectral_distance;
};

struct RunResult {
  Outcome outcome = Outcome::neither_match;
  StopReason stop_reason = StopReason::error;
  FlowMethod method = FlowMethod::pseudoinverse;
  Shape final_shape;
  int iterations = 0;
  int accepted_steps = 0;
  double initial_spectral_distance = 0.0;
  double final_spectral_distance = 0.0;
  double initial_shape_distance = 0.0;
  double final_shape_distance = 0.0;
  std::vector<TracePoint> trace;  // initial point, then every accepted step
  std::string error;
};

/// What the flow needs from the forward problem: sigma and its Jacobian.
class SpectralModel {
 public:
  virtual ~SpectralModel() = default;
  virtual Spectrum spectrum(const Shape& shape) const = 0;
  virtual Eigen::MatrixXd jacobian(const Shape& shape) const = 0;
};

/// The finite-element spectral map.
class FemSpectralModel final : public SpectralModel {
 public:
  explicit FemSpectralModel(SpectralMapConfig cfg, int jacobian_workers = 1)
      : cfg_(std::move(cfg)), workers_(jacobian_workers) {}

  Spectrum spectrum(const Shape& shape) const override { return sigma(shape, cfg_); }
  Eigen::MatrixXd jacobian(const Shape& shape) const override { return jacobian_fd(shape, cfg_, workers_).values; }

  const SpectralMapConfig& config() const { return cfg_; }

 private:
  SpectralMapConfig cfg_;
  int workers_;
};

/// J^+ v (pseudoinverse flow) or J^T v (gradient flow).
Eigen::VectorXd descent_direction(const Eigen::MatrixXd& jac, const Eigen::VectorXd& v_sigma, FlowMethod method,
                                  double pinv_rel_tol = 1e-8);

/// J (I - g g^T / |g|^2) for the rotation tangent g of `shape`; J itself when g = 0.
Eigen::MatrixXd project_out_rotation(const Eigen::MatrixXd& jac, const Shape& shape);

/// True when J^T v vanishes relative to |J| |v|; J^+ v vanishes exactly then too.
bool flow_vanishes(const Eigen::MatrixXd& jac, const Eigen::VectorXd& v_sigma, double rel_tol = 1e-12);

Outcome classify(double shape_distance, double spectral_distance, const DescentConfig& cfg);
Outcome classify(const Shape& final_shape, const Shape& target_shape, double final_spectral_distance,
                 const DescentConfig& cfg, const MetricConfig& metric_cfg);

/// Adaptive-step Euler integration of the flow from `start` toward `target_spectrum`.
/// `target_shape` is used only to classify the end point.
RunResult reconstruct(const Shape& start, const Spectrum& target_spectrum, const Shape& target_shape,
                      const SpectralModel& model, const DescentConfig& cfg);

RunResult reconstruct(const Shape& start, const Spectrum& target_spectrum, const Shape& target_shape,
                      const SpectralMapConfig& map_cfg, const DescentConfig& cfg);

}  // namespace drumhead
