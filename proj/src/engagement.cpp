#include "salvo/engagement.hpp"

#include <cmath>

#include "salvo/errors.hpp"
#include "salvo/integrator.hpp"

namespace salvo {

namespace {

struct Geometry {
  double range;
  double los;
};

// Shared by the true and estimated paths so that an exact estimate reproduces
// the true relative variables bit for bit.
RelativeVariables relative_from(const InterceptorState& interceptor,
                                const Geometry& geo, double target_speed,
                                double target_heading) {
  RelativeVariables rel;
  rel.range = geo.range;
  rel.los = geo.los;
  rel.deviation = wrap_angle(interceptor.heading - geo.los);
  rel.closing = target_speed * std::cos(target_heading - geo.los) -
                interceptor.speed * std::cos(rel.deviation);
  rel.transverse = target_speed * std::sin(target_heading - geo.los) -
                   interceptor.speed * std::sin(rel.deviation);
  return rel;
}

Geometry geometry(const InterceptorState& interceptor, double tx, double ty) {
  const double dx = tx - interceptor.x;
  const double dy = ty - interceptor.y;
  return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx))};
}

void check_guards(const RelativeVariables& rel, double speed,
                  double target_speed, double deviation_guard) {
  if (!(speed > target_speed)) {
    throw SpeedRatioViolation("interceptor speed must exceed target speed");
  }
  if (std::abs(rel.deviation) >= 0.5 * kPi - deviation_guard) {
    throw DeviationSingularity("deviation angle too close to +-pi/2");
  }
}

}  // namespace

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

TargetState TargetState::from_polar(double x, double y, double speed,
                                    double heading) {
  TargetState t;
  t.z << x, y, speed * std::cos(heading), speed * std::sin(heading);
  return t;
}

double TargetState::speed() const { return std::hypot(z[2], z[3]); }

double TargetState::heading() const {
  return wrap_angle(std::atan2(z[3], z[2]));
}

const Eigen::Matrix4d& target_dynamics() {
  static const Eigen::Matrix4d a = [] {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 2) = 1.0;
    m(1, 3) = 1.0;
    return m;
  }();
  return a;
}

RelativeVariables relative_variables(const InterceptorState& interceptor,
                                     const TargetState& target) {
  const Geometry geo = geometry(interceptor, target.z[0], target.z[1]);
  if (geo.range == 0.0) throw InterceptionReached(geo.range);
  return relative_from(interceptor, geo, target.speed(), target.heading());
}

double time_to_go(const RelativeVariables& rel, double speed,
                  double target_speed, double deviation_guard) {
  check_guards(rel, speed, target_speed, deviation_guard);
  const double denom = speed * speed - target_speed * target_speed;
  return rel.range *
         (rel.closing + 2.0 * speed * std::cos(rel.deviation) -
          rel.transverse * std::tan(rel.deviation)) /
         denom;
}

double time_to_go_rate(const RelativeVariables& rel, double speed,
                       double target_speed, double accel,
                       double deviation_guard) {
  check_guards(rel, speed, target_speed, deviation_guard);
  const double denom = speed * speed - target_speed * target_speed;
  const double c = std::cos(rel.deviation);
  const double sec2 = 1.0 / (c * c);
  return -1.0 + rel.transverse * rel.transverse * sec2 / denom -
         rel.range * rel.transverse * sec2 * accel / (speed * denom);
}

TargetState propagate_target(const TargetState& target, double dt) {
  const Eigen::Matrix4d& a = target_dynamics();
  TargetState next;
  next.z = rk4_step(target.z, dt, [&a](double, const Eigen::Vector4d& z) {
    return Eigen::Vector4d(a * z);
  });
  return next;
}

std::pair<InterceptorState, TargetState> step_kinematics(
    const InterceptorState& interceptor, const TargetState& target,
    double accel, double dt) {
  const double v = interceptor.speed;
  const double turn_rate = accel / v;
  const Eigen::Vector3d y0(interceptor.x, interceptor.y, interceptor.heading);
  const Eigen::Vector3d y1 =
      rk4_step(y0, dt, [v, turn_rate](double, const Eigen::Vector3d& y) {
        return Eigen::Vector3d(v * std::cos(y[2]), v * std::sin(y[2]),
                               turn_rate);
      });

  InterceptorState next = interceptor;
  next.x = y1[0];
  next.y = y1[1];
  next.heading = wrap_angle(y1[2]);
  next.lateral_accel = accel;
  return {next, propagate_target(target, dt)};
}

EstimatedEngagement estimated_engagement_variables(
    const InterceptorState& interceptor, const Eigen::Vector4d& z_hat) {
  if (!z_hat.allFinite()) throw DegenerateEstimate("target estimate not finite");
  const Geometry geo = geometry(interceptor, z_hat[0], z_hat[1]);
  if (geo.range == 0.0) {
    throw DegenerateEstimate("estimated target coincides with interceptor");
  }
  EstimatedEngagement est;
  est.range = geo.range;
  est.los = geo.los;
  est.target_speed = std::hypot(z_hat[2], z_hat[3]);
  est.target_heading = wrap_angle(std::atan2(z_hat[3], z_hat[2]));
  est.rel = relative_from(interceptor, geo, est.target_speed,
                          est.target_heading);
  return est;
}

}  // namespace salvo
