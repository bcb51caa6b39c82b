#include "drumhead/descent.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "drumhead/errors.hpp"
#include "drumhead/linalg.hpp"

namespace drumhead {

std::string_view to_string(FlowMethod m) {
  return m == FlowMethod::pseudoinverse ? "pseudoinverse" : "gradient";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::both_match: return "both_match";
    case Outcome::shape_only_match: return "shape_only_match";
    case Outcome::spectrum_only_match: return "spectrum_only_match";
    case Outcome::neither_match: return "neither_match";
  }
  return "?";
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::spectrum_converged: return "spectrum_converged";
    case StopReason::step_underflow: return "step_underflow";
    case StopReason::iteration_cap: return "iteration_cap";
    case StopReason::error: return "error";
  }
  return "?";
}

FlowMethod parse_flow_method(std::string_view s) {
  if (s == "pseudoinverse") return FlowMethod::pseudoinverse;
  if (s == "gradient") return FlowMethod::gradient;
  throw std::invalid_argument("unknown flow method '" + std::string(s) + "'");
}

Outcome parse_outcome(std::string_view s) {
  for (Outcome o : {Outcome::both_match, Outcome::shape_only_match, Outcome::spectrum_only_match,
                    Outcome::neither_match})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown outcome '" + std::string(s) + "'");
}

void DescentConfig::validate() const {
  if (!(eps_shape > 0.0) || !(eps_spectrum > 0.0))
    throw std::invalid_argument("DescentConfig: tolerances must be positive");
  if (!(shrink > 0.0 && shrink < 1.0 && grow > 1.0))
    throw std::invalid_argument("DescentConfig: need 0 < shrink < 1 < grow");
  if (!(initial_step > 0.0) || !(min_step > 0.0))
    throw std::invalid_argument("DescentConfig: step sizes must be positive");
  if (max_iters < 0) throw std::invalid_argument("DescentConfig: max_iters must be >= 0");
  if (pinv_rel_tol < 0.0) throw std::invalid_argument("DescentConfig: pinv_rel_tol must be >= 0");
  metric.validate();
}

Eigen::VectorXd descent_direction(const Eigen::MatrixXd& jac, const Eigen::VectorXd& v_sigma, FlowMethod method,
                                  double pinv_rel_tol) {
  if (jac.rows() != v_sigma.size()) throw std::invalid_argument("descent_direction: dimension mismatch");
  if (method == FlowMethod::gradient) return jac.transpose() * v_sigma;
  return linalg::pinv_apply(jac, v_sigma, pinv_rel_tol);
}

Eigen::MatrixXd project_out_rotation(const Eigen::MatrixXd& jac, const Shape& shape) {
  const Eigen::VectorXd g = rotation_tangent(shape);
  const double g2 = g.squaredNorm();
  if (g2 == 0.0) return jac;
  return jac - (jac * g) * (g.transpose() / g2);
}

bool flow_vanishes(const Eigen::MatrixXd& jac, const Eigen::VectorXd& v_sigma, double rel_tol) {
  return (jac.transpose() * v_sigma).norm() <= rel_tol * jac.norm() * v_sigma.norm();
}

Outcome classify(double shape_distance, double spectral_distance, const DescentConfig& cfg) {
  const bool shape_ok = shape_distance <= cfg.eps_shape;
  const bool spectrum_ok = spectral_distance <= cfg.eps_spectrum;
  if (shape_ok && spectrum_ok) return Outcome::both_match;
  if (shape_ok) return Outcome::shape_only_match;
  if (spectrum_ok) return Outcome::spectrum_only_match;
  return Outcome::neither_match;
}

Outcome classify(const Shape& final_shape, const Shape& target_shape, double final_spectral_distance,
                 const DescentConfig& cfg, const MetricConfig& metric_cfg) {
  return classify(isometry_distance(final_shape, target_shape, metric_cfg), final_spectral_distance, cfg);
}

RunResult reconstruct(const Shape& start, const Spectrum& target_spectrum, const Shape& target_shape,
                      const SpectralModel& model, const DescentConfig& cfg) {
  cfg.validate();
  if (start.dof() != target_shape.dof())
    throw std::invalid_argument("reconstruct: start and target have different shape dimensions");

  RunResult res;
  res.method = cfg.method;
  res.initial_shape_distance = isometry_distance(start, target_shape, cfg.metric);

  Shape current = start;
  Spectrum current_spec = model.spectrum(current);
  if (current_spec.size() != target_spectrum.size())
    throw std::invalid_argument("reconstruct: target spectrum length does not match the model");
  double sd = spectral_distance(current_spec, target_spectrum);
  res.initial_spectral_distance = sd;

  double step = cfg.initial_step;
  double t = 0.0;
  if (cfg.record_trace) res.trace.push_back({0, t, step, sd});

  Eigen::VectorXd direction;
  bool need_direction = true;
  for (;;) {
    if (sd <= cfg.eps_spectrum) {
      res.stop_reason = StopReason::spectrum_converged;
      break;
    }
    if (step < cfg.min_step) {
      res.stop_reason = StopReason::step_underflow;
      break;
    }
    if (res.iterations >= cfg.max_iters) {
      res.stop_reason = StopReason::iteration_cap;
      break;
    }
    if (need_direction) {
      const Eigen::VectorXd v_sigma = target_spectrum - current_spec;
      Eigen::MatrixXd jac = model.jacobian(current);
      if (cfg.project_gauge) jac = project_out_rotation(jac, current);
      if (flow_vanishes(jac, v_sigma)) {
        // Critical point of the spectral distance: every trial would return P itself.
        res.stop_reason = StopReason::step_underflow;
        break;
      }
      direction = descent_direction(jac, v_sigma, cfg.method, cfg.pinv_rel_tol);
      need_direction = false;
    }

    ++res.iterations;
    bool accepted = false;
    Spectrum trial_spec;
    std::optional<Shape> trial;
    try {
      trial.emplace(current.with_coefficients(current.coefficients() + step * direction));
      trial_spec = model.spectrum(*trial);
      accepted = spectral_distance(trial_spec, target_spectrum) < sd;
    } catch (const NumericalError&) {
      accepted = false;  // e.g. the trial boundary tangles the mesh
    } catch (const std::invalid_argument&) {
      accepted = false;  // non-finite coefficients
    }

    if (accepted) {
      t += step;
      current = std::move(*trial);
      current_spec = std::move(trial_spec);
      sd = spectral_distance(current_spec, target_spectrum);
      ++res.accepted_steps;
      if (cfg.record_trace) res.trace.push_back({res.iterations, t, step, sd});
      step *= cfg.grow;
      need_direction = true;
    } else {
      step *= cfg.shrink;
    }
  }

  res.final_spectral_distance = sd;
  res.final_shape_distance = isometry_distance(current, target_shape, cfg.metric);
  res.outcome = classify(res.final_shape_distance, sd, cfg);
  res.final_shape = std::move(current);
  return res;
}

RunResult reconstruct(const Shape& start, const Spectrum& target_spectrum, const Shape& target_shape,
                      const SpectralMapConfig& map_cfg, const DescentConfig& cfg) {
  return reconstruct(start, target_spectrum, target_shape, FemSpectralModel(map_cfg), cfg);
}

}  // namespace drumhead
