#include "salvo/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "salvo/errors.hpp"

namespace salvo {

void GuidanceGains::validate() const {
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) {
    throw ConfigError("guidance gains lambda1, lambda2 must be positive");
  }
  if (!(max_accel > 0.0)) throw ConfigError("max_accel must be positive");
  if (!(sign_smoothing >= 0.0)) {
    throw ConfigError("sign_smoothing must be non-negative");
  }
}

double switching_sign(double x, double eps) {
  if (eps > 0.0) return x / (std::abs(x) + eps);
  return static_cast<double>((x > 0.0) - (x < 0.0));
}

Eigen::VectorXd sliding_variable(const ActuationGraph& graph,
                                 const Eigen::VectorXd& tgo) {
  return sliding_variable(graph, tgo,
                          std::vector<bool>(static_cast<std::size_t>(graph.size()), true));
}

Eigen::VectorXd sliding_variable(const ActuationGraph& graph,
                                 const Eigen::VectorXd& tgo,
                                 const std::vector<bool>& active) {
  const int n = graph.size();
  const auto& a = graph.adjacency();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (a(i, j) != 0 && active[static_cast<std::size_t>(j)]) {
        sum += tgo[i] - tgo[j];
      }
    }
    s[i] = sum;
  }
  return s;
}

namespace {

Command saturate(double raw, double max_accel) {
  Command c;
  c.raw = raw;
  c.accel = std::clamp(raw, -max_accel, max_accel);
  c.saturated = std::abs(raw) > max_accel;
  return c;
}

}  // namespace

Command pursuit_command(double speed, const EstimatedEngagement& est,
                        double max_accel) {
  const double range = std::max(est.range, kMinRange);
  return saturate(speed * est.rel.transverse / range, max_accel);
}

Command guidance_command(double speed, const EstimatedEngagement& est,
                         double s, double nu, const GuidanceGains& gains) {
  if (!(speed > est.target_speed)) {
    throw SpeedRatioViolation("estimated target speed reaches interceptor speed");
  }
  const double range = std::max(est.range, kMinRange);
  const double vt = est.rel.transverse;
  const double vt_guarded =
      (vt < 0.0 ? -1.0 : 1.0) * std::max(std::abs(vt), kMinTransverseSpeed);
  const double c = std::cos(est.rel.deviation);
  const double gain = speed * (speed * speed - est.target_speed * est.target_speed) *
                      c * c / (range * vt_guarded);
  const double twisting =
      gains.lambda1 * std::sqrt(std::abs(s)) * switching_sign(s, gains.sign_smoothing) - nu;
  return saturate(speed * vt / range + gain * twisting, gains.max_accel);
}

double nu_step(double nu, double s, double lambda2, double dt,
               double sign_smoothing) {
  return nu - lambda2 * switching_sign(s, sign_smoothing) * dt;
}

void ConsensusDetector::observe(double time, double spread) {
  if (spread < threshold_) {
    if (!candidate_) candidate_ = time;
    if (!confirmed_ && time - *candidate_ >= window_ - 1e-12) confirmed_ = candidate_;
  } else {
    candidate_.reset();
  }
}

}  // namespace salvo
