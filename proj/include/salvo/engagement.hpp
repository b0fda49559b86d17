// Planar engagement kinematics between one interceptor and a constant-velocity
// target: relative variables, exact deviated-pursuit time-to-go and its rate.
#pragma once

#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace salvo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Default distance short of pi/2 at which tan(delta) is refused [rad].
inline constexpr double kDefaultDeviationGuard = 1e-3;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

struct InterceptorState {
  double x = 0.0;        // [m]
  double y = 0.0;        // [m]
  double speed = 0.0;    // V_M [m/s], constant
  double heading = 0.0;  // gamma_M [rad]
  double lateral_accel = 0.0;  // last applied command [m/s^2]
};

/// Target state z = [X, Y, Xdot, Ydot] under zdot = A z.
struct TargetState {
  Eigen::Vector4d z = Eigen::Vector4d::Zero();

  static TargetState from_polar(double x, double y, double speed,
                                double heading);

  double speed() const;
  double heading() const;
};

/// The constant-velocity dynamics matrix A.
const Eigen::Matrix4d& target_dynamics();

struct RelativeVariables {
  double range = 0.0;       // r [m]
  double los = 0.0;         // theta [rad]
  double deviation = 0.0;   // delta = gamma_M - theta [rad]
  double closing = 0.0;     // V_r = rdot [m/s]
  double transverse = 0.0;  // V_theta = r thetadot [m/s]
};

/// Relative variables of an interceptor against the target.
/// Throws InterceptionReached when the positions coincide.
RelativeVariables relative_variables(const InterceptorState& interceptor,
                                     const TargetState& target);

/// Exact deviated-pursuit time-to-go against a constant-velocity target.
/// Throws SpeedRatioViolation when speed <= target_speed and
/// DeviationSingularity when |delta| >= pi/2 - deviation_guard.
double time_to_go(const RelativeVariables& rel, double speed,
                  double target_speed,
                  double deviation_guard = kDefaultDeviationGuard);

/// d(t_go)/dt under lateral acceleration `accel`; same guards as time_to_go.
double time_to_go_rate(const RelativeVariables& rel, double speed,
                       double target_speed, double accel,
                       double deviation_guard = kDefaultDeviationGuard);

/// Advances both bodies by one RK4 step with `accel` held over the step.
/// The interceptor follows xdot = V cos(gamma), ydot = V sin(gamma),
/// gammadot = a / V.
std::pair<InterceptorState, TargetState> step_kinematics(
    const InterceptorState& interceptor, const TargetState& target,
    double accel, double dt);

/// Target advanced by `dt` under zdot = A z (exact: A is nilpotent).
TargetState propagate_target(const TargetState& target, double dt);

/// Engagement variables an interceptor reconstructs from its own position
/// and an estimate z_hat of the target state.
struct EstimatedEngagement {
  double range = 0.0;
  double los = 0.0;
  double target_heading = 0.0;
  double target_speed = 0.0;
  RelativeVariables rel;
};

/// Throws DegenerateEstimate when z_hat is not finite or its position
/// coincides with the interceptor.
EstimatedEngagement estimated_engagement_variables(
    const InterceptorState& interceptor, const Eigen::Vector4d& z_hat);

}  // namespace salvo
