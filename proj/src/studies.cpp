#include "salvo/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Core>

#include "salvo/errors.hpp"
#include "salvo/integrator.hpp"

namespace salvo {

namespace {

// [x_M, y_M, gamma_M, X_T, Y_T]
using PursuitState = Eigen::Matrix<double, 5, 1>;

struct PursuitFrame {
  RelativeVariables rel;
  double speed;
  double target_speed;
};

PursuitFrame frame_of(const PursuitState& y, const PursuitGeometry& geo) {
  const double vm = geo.speed_ratio * geo.target_speed;
  InterceptorState m{y(0), y(1), vm, y(2), 0.0};
  TargetState t = TargetState::from_polar(y(3), y(4), geo.target_speed,
                                          geo.target_heading);
  return {relative_variables(m, t), vm, geo.target_speed};
}

}  // namespace

InterceptorState PursuitGeometry::interceptor() const {
  return {0.0, 0.0, speed_ratio * target_speed, wrap_angle(los + deviation), 0.0};
}

TargetState PursuitGeometry::target() const {
  return TargetState::from_polar(range * std::cos(los), range * std::sin(los),
                                 target_speed, target_heading);
}

PursuitGeometry random_pursuit_geometry(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  for (;;) {
    PursuitGeometry g;
    g.target_speed = draw(100.0, 400.0);
    g.speed_ratio = draw(1.1, 2.0);
    g.range = draw(2000.0, 15000.0);
    g.los = draw(-kPi, kPi);
    g.deviation = draw(-60.0, 60.0) * kDegToRad;
    g.target_heading = draw(-kPi, kPi);
    if (g.speed_ratio * std::sin(std::abs(g.deviation)) < 1.0) return g;
  }
}

PursuitFlight fly_deviated_pursuit(const PursuitGeometry& geo, double dt,
                                   double log_interval, double terminal_radius) {
  const double vm = geo.speed_ratio * geo.target_speed;
  const double vt = geo.target_speed;
  const InterceptorState m0 = geo.interceptor();
  const TargetState t0 = geo.target();

  PursuitState y;
  y << m0.x, m0.y, m0.heading, t0.z(0), t0.z(1);
  const double vx_t = t0.z(2), vy_t = t0.z(3);

  PursuitFlight out;
  out.predicted_tgo = time_to_go(frame_of(y, geo).rel, vm, vt);

  auto rhs = [&](double, const PursuitState& s) {
    const RelativeVariables rel = frame_of(s, geo).rel;
    PursuitState d;
    d << vm * std::cos(s(2)), vm * std::sin(s(2)), rel.transverse / rel.range,
        vx_t, vy_t;
    return d;
  };

  const double horizon = 3.0 * out.predicted_tgo + 100.0;
  double t = 0.0;
  double next_log = 0.0;
  for (;;) {
    const RelativeVariables rel = frame_of(y, geo).rel;
    if (log_interval > 0.0 && t >= next_log - 1e-12) {
      out.tgo_log.emplace_back(t, time_to_go(rel, vm, vt));
      next_log += log_interval;
    }
    if (rel.range < terminal_radius) {
      out.captured = true;
      out.flight_time = t + rel.range / std::max(-rel.closing, 1e-9);
      return out;
    }
    if (t > horizon) {
      out.flight_time = t;
      return out;
    }
    double h = std::min(dt, 0.01 * rel.range / vm);
    if (rel.transverse != 0.0)
      h = std::min(h, 0.002 * rel.range / std::abs(rel.transverse));
    if (log_interval > 0.0) h = std::min(h, std::max(next_log - t, 1e-9));
    y = rk4_step(y, h, rhs);
    t += h;
  }
}

TgoStudy verify_time_to_go(int trials, std::uint64_t seed, double dt) {
  TgoStudy study;
  study.tolerance = 2.0 * dt;
  for (int k = 0; k < trials; ++k) {
    const PursuitGeometry geo = random_pursuit_geometry(seed + k);
    const PursuitFlight f = fly_deviated_pursuit(geo, dt);
    const double err = f.captured ? f.predicted_tgo - f.flight_time
                                  : std::numeric_limits<double>::infinity();
    study.errors.push_back(err);
    if (std::abs(err) <= study.tolerance) ++study.passed;
  }
  return study;
}

RateStudy pursuit_rate_study(int runs, std::uint64_t seed, double dt,
                             double log_interval) {
  RateStudy study;
  study.runs = runs;
  for (int k = 0; k < runs; ++k) {
    const PursuitGeometry geo = random_pursuit_geometry(seed + k);
    const PursuitFlight f = fly_deviated_pursuit(geo, dt, log_interval);
    for (std::size_t i = 1; i < f.tgo_log.size(); ++i) {
      const auto [ta, ga] = f.tgo_log[i - 1];
      const auto [tb, gb] = f.tgo_log[i];
      const double slope = (gb - ga) / (tb - ta);
      study.worst_slope_error = std::max(study.worst_slope_error, std::abs(slope + 1.0));
      ++study.samples;
    }
  }
  return study;
}

ObserverRun run_observer(const SensingGraph& graph, const ObserverGains& gains,
                         const ScalingCertificate& cert, const TargetState& target,
                         const EstimateMatrix& initial_errors, double dt,
                         double max_time, double settle_threshold,
                         double lyapunov_floor) {
  const int n = graph.size();
  Eigen::Vector4d z = target.z;
  EstimateMatrix z_hat = initial_errors;
  for (int i = 0; i < n; ++i) z_hat.row(i) += z.transpose();

  ObserverRun run;
  auto max_error = [&] {
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e = std::max(e, (z_hat.row(i) - z.transpose()).norm());
    return e;
  };

  EstimateMatrix eta = relative_error(graph, z_hat, z);
  double v = lyapunov_value(gains, cert, eta);
  double t = 0.0;
  while (t < max_time) {
    const double eta_norm = eta.norm();
    if (run.settle_time < 0.0 && max_error() < settle_threshold) run.settle_time = t;
    if (run.settle_time >= 0.0 && eta_norm <= lyapunov_floor) break;

    z_hat = observer_step(graph, gains, z_hat, z, dt);
    z = propagate_target(TargetState{z}, dt).z;
    t += dt;
    eta = relative_error(graph, z_hat, z);
    const double v_next = lyapunov_value(gains, cert, eta);
    if (eta_norm > lyapunov_floor && !(v_next < v)) run.lyapunov_decreasing = false;
    v = v_next;
  }
  return run;
}

ObserverStudy observer_scaling_study(const SensingGraph& graph,
                                     const ObserverGains& gains,
                                     const TargetState& target,
                                     const ObserverStudyOptions& opt) {
  const ScalingCertificate cert = scaling_certificate(graph);
  require_valid(cert);
  ObserverStudy study;
  study.scale = opt.scale;
  const int n = graph.size();
  for (int k = 0; k < opt.trials; ++k) {
    std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> u(-opt.error_magnitude, opt.error_magnitude);
    EstimateMatrix err(n, 4);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 4; ++c) err(i, c) = u(rng);

    const ObserverRun base = run_observer(graph, gains, cert, target, err, opt.dt,
                                          opt.max_time, opt.settle_threshold,
                                          opt.lyapunov_floor);
    const ObserverRun scaled =
        run_observer(graph, gains, cert, target, EstimateMatrix(opt.scale * err),
                     opt.dt, opt.max_time, opt.settle_threshold, opt.lyapunov_floor);
    ObserverTrial trial;
    trial.settle_time = base.settle_time;
    trial.scaled_settle_time = scaled.settle_time;
    trial.settled = base.settle_time >= 0.0 && scaled.settle_time >= 0.0;
    trial.lyapunov_decreasing = base.lyapunov_decreasing && scaled.lyapunov_decreasing;
    study.all_lyapunov_decreasing = study.all_lyapunov_decreasing && trial.lyapunov_decreasing;
    const double ratio = trial.settled && trial.settle_time > 0.0
                             ? trial.scaled_settle_time / trial.settle_time
                             : std::numeric_limits<double>::infinity();
    study.worst_ratio = std::max(study.worst_ratio, ratio);
    study.trials.push_back(trial);
  }
  return study;
}

}  // namespace salvo
