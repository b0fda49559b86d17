// Synchronous closed-loop engagement: observer, time-to-go exchange,
// super-twisting commands and kinematics in lockstep at a fixed step.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "salvo/engagement.hpp"
#include "salvo/graph.hpp"
#include "salvo/guidance.hpp"
#include "salvo/observer.hpp"

namespace salvo {

struct TargetSpec {
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  double heading = 0.0;  // [rad]

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct InterceptorSpec {
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  double heading = 0.0;  // [rad]
  /// Initial estimate for agents without a seeker; ignored for seeker agents.
  Eigen::Vector4d initial_estimate = Eigen::Vector4d::Zero();

  friend bool operator==(const InterceptorSpec&, const InterceptorSpec&) = default;
};

struct ObserverInit {
  double position_perturbation = 100.0;  // [m], half-width of uniform noise
  double velocity_perturbation = 10.0;   // [m/s]
  std::uint64_t seed = 1;

  friend bool operator==(const ObserverInit&, const ObserverInit&) = default;
};

struct Scenario {
  std::string name;
  TargetSpec target;
  std::vector<InterceptorSpec> interceptors;
  std::vector<Edge> sensing_edges;
  std::vector<Edge> actuation_edges;
  ObserverGains observer;
  ObserverInit observer_init;
  GuidanceGains guidance;
  double dt = 1e-3;
  double max_time = 60.0;
  double capture_radius = 5.0;
  double miss_radius = 50.0;
  double telemetry_interval = 0.01;
  double consensus_threshold = 0.01;
  double consensus_window = 0.1;
  double settle_threshold = 1e-3;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Per-agent sample of one telemetry row. Angles in radians.
struct AgentSample {
  double x = 0, y = 0, heading = 0;
  double range = 0, los = 0, deviation = 0;
  double est_deviation = 0;
  double tgo = 0, s = 0, nu = 0, accel = 0;
  double estimate_error = 0;  // ||z_hat^i - z||
  bool active = true;
};

struct TelemetryRow {
  double time = 0;
  std::vector<AgentSample> agents;
};

enum class Termination { AllIntercepted, TimedOut, NotRun };

struct AgentOutcome {
  bool intercepted = false;
  double time = 0.0;
  double miss_distance = 0.0;  // range at the event, or closest approach if none
  bool captured = false;  // r dropped below the capture radius

  friend bool operator==(const AgentOutcome&, const AgentOutcome&) = default;
};

struct RunResult {
  std::vector<AgentOutcome> agents;
  std::optional<double> consensus_time;
  std::optional<double> observer_settling_time;
  double salvo_spread = 0.0;
  double final_time = 0.0;
  double max_abs_command = 0.0;
  Termination termination = Termination::NotRun;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct RunOutput {
  RunResult result;
  std::vector<TelemetryRow> telemetry;  // every step, plus the final state
};

/// Initial per-agent estimates: seeker agents get the truth plus seeded
/// uniform noise, seeker-less agents their configured estimate.
EstimateMatrix initial_estimates(const Scenario& scenario,
                                 const SensingGraph& graph);

/// Runs one engagement. Deterministic for identical scenarios (the seed is
/// part of the scenario). Throws ConfigError for invalid scenarios.
RunOutput run(const Scenario& scenario);

}  // namespace salvo
