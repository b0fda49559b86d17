// Super-twisting time-to-go consensus over the leaderless actuation graph.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "salvo/engagement.hpp"
#include "salvo/graph.hpp"

namespace salvo {

inline constexpr double kGravity = 9.81;

struct GuidanceGains {
  double lambda1 = 5.0;
  double lambda2 = 10.0;
  double max_accel = 40.0 * kGravity;  // [m/s^2]
  /// Boundary-layer width for sign(); 0 keeps the exact discontinuity.
  double sign_smoothing = 0.0;
  /// Freeze the super-twisting integrator while the command saturates.
  bool anti_windup = false;

  void validate() const;

  friend bool operator==(const GuidanceGains&, const GuidanceGains&) = default;
};

/// Magnitude floors applied inside 1 / (r_hat * V_theta_hat).
inline constexpr double kMinTransverseSpeed = 0.1;  // [m/s]
inline constexpr double kMinRange = 1.0;            // [m]

/// sign(x) with sign(0) = 0, or x / (|x| + eps) when eps > 0.
double switching_sign(double x, double eps = 0.0);

/// s = L_I t_go, evaluated as s_i = sum_j a_ij (t_go_i - t_go_j).
Eigen::VectorXd sliding_variable(const ActuationGraph& graph,
                                 const Eigen::VectorXd& tgo);

/// Same, restricted to active agents; inactive agents get s_i = 0 and are
/// dropped from their neighbours' sums.
Eigen::VectorXd sliding_variable(const ActuationGraph& graph,
                                 const Eigen::VectorXd& tgo,
                                 const std::vector<bool>& active);

struct Command {
  double accel = 0.0;  // saturated command
  double raw = 0.0;    // before saturation
  bool saturated = false;
};

/// Pursuit term V_M * V_theta_hat / r_hat, saturated.
Command pursuit_command(double speed, const EstimatedEngagement& est,
                        double max_accel);

/// Pursuit term plus the super-twisting correction
/// [V_M (V_M^2 - V_T^2) cos^2(delta) / (r V_theta)] (L1 sig^{1/2}(s) - nu).
/// Throws SpeedRatioViolation when speed <= estimated target speed.
Command guidance_command(double speed, const EstimatedEngagement& est,
                         double s, double nu, const GuidanceGains& gains);

/// nu' = nu - L2 sign(s) dt (exact for s held over the step).
double nu_step(double nu, double s, double lambda2, double dt,
               double sign_smoothing = 0.0);

/// Tracks when the time-to-go spread first stays below a threshold for a
/// full window.
class ConsensusDetector {
 public:
  ConsensusDetector(double threshold, double window)
      : threshold_(threshold), window_(window) {}

  void observe(double time, double spread);
  std::optional<double> consensus_time() const { return confirmed_; }
  double threshold() const { return threshold_; }

 private:
  double threshold_;
  double window_;
  std::optional<double> candidate_;
  std::optional<double> confirmed_;
};

}  // namespace salvo
