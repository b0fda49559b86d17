// Numerical verification studies shared by the CLI and the acceptance suite.
#pragma once

#include <cstdint>
#include <vector>

#include "salvo/engagement.hpp"
#include "salvo/graph.hpp"
#include "salvo/observer.hpp"

namespace salvo {

/// Random constant-deviation pursuit geometry.
struct PursuitGeometry {
  double target_speed = 0;
  double speed_ratio = 0;  // V_M / V_T
  double range = 0;
  double los = 0;
  double deviation = 0;
  double target_heading = 0;

  InterceptorState interceptor() const;
  TargetState target() const;
};

/// Draws a geometry with ratio in [1.1, 2] and |delta| <= 60 deg that admits
/// a terminal line of sight (V_M |sin delta| < V_T).
PursuitGeometry random_pursuit_geometry(std::uint64_t seed);

struct PursuitFlight {
  double predicted_tgo = 0;
  double flight_time = 0;
  bool captured = false;
  /// (time, t_go) samples at the logging interval.
  std::vector<std::pair<double, double>> tgo_log;
};

/// Integrates the engagement with a_M = V_M V_theta / r evaluated inside each
/// RK4 stage (so delta stays constant), refining the step while the LOS
/// rotates quickly, until r < terminal_radius; the remaining range is closed
/// at the current range rate.
PursuitFlight fly_deviated_pursuit(const PursuitGeometry& geo, double dt,
                                   double log_interval = 0.0,
                                   double terminal_radius = 0.5);

struct TgoStudy {
  std::vector<double> errors;  // predicted - simulated [s]
  double tolerance = 0;
  int passed = 0;
};

/// Exactness of the closed-form time-to-go over `trials` seeded geometries,
/// with tolerance 2 dt.
TgoStudy verify_time_to_go(int trials, std::uint64_t seed, double dt = 1e-3);

struct RateStudy {
  double worst_slope_error = 0;  // max |slope + 1|
  int samples = 0;
  int runs = 0;
};

/// Centered finite-difference slope of t_go along pursuit runs.
RateStudy pursuit_rate_study(int runs, std::uint64_t seed, double dt = 1e-3,
                             double log_interval = 0.01);

struct ObserverTrial {
  double settle_time = 0;         // unscaled initial errors
  double scaled_settle_time = 0;  // errors multiplied by the scale factor
  bool settled = false;
  bool lyapunov_decreasing = false;
};

struct ObserverStudy {
  std::vector<ObserverTrial> trials;
  double scale = 10;
  double worst_ratio = 0;  // max scaled / base settling time
  bool all_lyapunov_decreasing = true;
};

struct ObserverStudyOptions {
  int trials = 50;
  double scale = 10.0;
  double error_magnitude = 1e4;  // initial errors drawn in [-m, m]
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double max_time = 30.0;
  double settle_threshold = 1e-3;
  double lyapunov_floor = 1e-6;
};

struct ObserverRun {
  double settle_time = -1;  // first t with max_i error below threshold; < 0 if never
  bool lyapunov_decreasing = true;
};

/// Observer-only run from z_hat(0) = 1 (x) z + errors.
ObserverRun run_observer(const SensingGraph& graph, const ObserverGains& gains,
                         const ScalingCertificate& cert, const TargetState& target,
                         const EstimateMatrix& initial_errors, double dt,
                         double max_time, double settle_threshold,
                         double lyapunov_floor);

/// Fixed-time signature: settling time barely grows when the initial errors
/// are scaled up.
ObserverStudy observer_scaling_study(const SensingGraph& graph,
                                     const ObserverGains& gains,
                                     const TargetState& target,
                                     const ObserverStudyOptions& options);

}  // namespace salvo
