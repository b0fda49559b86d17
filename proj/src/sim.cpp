#include "salvo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "salvo/errors.hpp"

namespace salvo {

void Scenario::validate() const {
  if (interceptors.empty()) throw ConfigError("scenario has no interceptors");
  if (!(target.speed >= 0.0)) throw ConfigError("target speed must be >= 0");
  for (std::size_t i = 0; i < interceptors.size(); ++i) {
    const double vm = interceptors[i].speed;
    if (!(vm > target.speed)) {
      throw ConfigError("interceptor " + std::to_string(i + 1) +
                        ": speed must exceed target speed (V_M^2 - V_T^2 > 0)");
    }
  }
  observer.validate();
  guidance.validate();
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
  if (!(capture_radius > 0.0)) throw ConfigError("capture_radius must be positive");
  if (!(miss_radius >= capture_radius)) {
    throw ConfigError("miss_radius must be >= capture_radius");
  }
  if (!(telemetry_interval > 0.0)) {
    throw ConfigError("telemetry_interval must be positive");
  }
  if (!(observer_init.position_perturbation >= 0.0 &&
        observer_init.velocity_perturbation >= 0.0)) {
    throw ConfigError("observer perturbation magnitudes must be >= 0");
  }
  const auto [sensing, actuation] =
      build_graphs(static_cast<int>(interceptors.size()), sensing_edges,
                   actuation_edges);
  if (!check_spanning_tree(sensing)) {
    throw ConfigError("sensing graph has no spanning tree rooted at the target");
  }
}

EstimateMatrix initial_estimates(const Scenario& scenario,
                                 const SensingGraph& graph) {
  const int n = graph.size();
  const TargetState target = TargetState::from_polar(
      scenario.target.x, scenario.target.y, scenario.target.speed,
      scenario.target.heading);
  std::mt19937_64 rng(scenario.observer_init.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  EstimateMatrix z_hat(n, 4);
  for (int i = 0; i < n; ++i) {
    if (graph.senses_target(i)) {
      const double p = scenario.observer_init.position_perturbation;
      const double v = scenario.observer_init.velocity_perturbation;
      Eigen::Vector4d noise;
      noise[0] = p * unit(rng);
      noise[1] = p * unit(rng);
      noise[2] = v * unit(rng);
      noise[3] = v * unit(rng);
      z_hat.row(i) = (target.z + noise).transpose();
    } else {
      z_hat.row(i) = scenario.interceptors[static_cast<std::size_t>(i)]
                         .initial_estimate.transpose();
    }
  }
  return z_hat;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct AgentGuidance {
  std::optional<EstimatedEngagement> est;
  double tgo = kNaN;
  bool tgo_valid = false;
};

AgentGuidance evaluate_estimates(const InterceptorState& agent,
                                 const Eigen::Vector4d& z_hat) {
  AgentGuidance g;
  try {
    g.est = estimated_engagement_variables(agent, z_hat);
    g.tgo = time_to_go(g.est->rel, agent.speed, g.est->target_speed);
    g.tgo_valid = true;
  } catch (const DegenerateEstimate&) {
  } catch (const SpeedRatioViolation&) {
  } catch (const DeviationSingularity&) {
  }
  return g;
}

AgentSample sample_of(const InterceptorState& agent, const TargetState& target,
                      const Eigen::Vector4d& z_hat) {
  AgentSample s;
  s.x = agent.x;
  s.y = agent.y;
  s.heading = agent.heading;
  const double dx = target.z[0] - agent.x;
  const double dy = target.z[1] - agent.y;
  s.range = std::hypot(dx, dy);
  s.los = wrap_angle(std::atan2(dy, dx));
  s.deviation = wrap_angle(agent.heading - s.los);
  s.estimate_error = (z_hat - target.z).norm();
  s.est_deviation = kNaN;
  s.tgo = kNaN;
  return s;
}

double true_range(const InterceptorState& agent, const TargetState& target) {
  return std::hypot(target.z[0] - agent.x, target.z[1] - agent.y);
}

}  // namespace

RunOutput run(const Scenario& scenario) {
  scenario.validate();
  const int n = static_cast<int>(scenario.interceptors.size());
  const auto [sensing, actuation] =
      build_graphs(n, scenario.sensing_edges, scenario.actuation_edges);
  const double dt = scenario.dt;
  const GuidanceGains& gains = scenario.guidance;

  TargetState target = TargetState::from_polar(
      scenario.target.x, scenario.target.y, scenario.target.speed,
      scenario.target.heading);
  std::vector<InterceptorState> agents;
  for (const auto& spec : scenario.interceptors) {
    agents.push_back({spec.x, spec.y, spec.speed, wrap_angle(spec.heading), 0.0});
  }
  EstimateMatrix z_hat = initial_estimates(scenario, sensing);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(n);
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<double> prev_range(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) prev_range[i] = true_range(agents[i], target);
  std::vector<double> closest = prev_range;
  std::vector<AgentSample> frozen(static_cast<std::size_t>(n));
  ConsensusDetector consensus(scenario.consensus_threshold,
                              scenario.consensus_window);

  RunOutput out;
  RunResult& result = out.result;
  result.agents.assign(static_cast<std::size_t>(n), AgentOutcome{});
  const auto max_steps =
      static_cast<long long>(std::ceil(scenario.max_time / dt - 1e-9));
  out.telemetry.reserve(static_cast<std::size_t>(std::min(max_steps, 200000LL)) + 2);

  std::vector<AgentGuidance> guidance(static_cast<std::size_t>(n));
  Eigen::VectorXd tgo(n);
  long long step = 0;
  double time = 0.0;
  int remaining = n;

  for (; step < max_steps && remaining > 0; ++step) {
    time = static_cast<double>(step) * dt;

    // Estimated engagement variables and time-to-go from the current estimates.
    std::vector<bool> exchanging(static_cast<std::size_t>(n), false);
    bool all_valid = true;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      guidance[i] = evaluate_estimates(agents[i], z_hat.row(i).transpose());
      tgo[i] = guidance[i].tgo;
      exchanging[i] = guidance[i].tgo_valid;
      all_valid = all_valid && guidance[i].tgo_valid;
    }

    // Time-to-go exchange over the actuation graph.
    for (int i = 0; i < n; ++i) {
      if (!exchanging[i]) tgo[i] = 0.0;
    }
    const Eigen::VectorXd s = sliding_variable(actuation, tgo, exchanging);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
      if (!exchanging[i]) continue;
      lo = std::min(lo, tgo[i]);
      hi = std::max(hi, tgo[i]);
    }
    consensus.observe(time, all_valid && hi >= lo
                                ? hi - lo
                                : std::numeric_limits<double>::infinity());

    // Commands and super-twisting integrators.
    TelemetryRow row;
    row.time = time;
    row.agents.resize(static_cast<std::size_t>(n));
    double worst_error = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) {
        row.agents[i] = frozen[i];
        continue;
      }
      const AgentGuidance& g = guidance[i];
      Command cmd;
      if (exchanging[i]) {
        try {
          cmd = guidance_command(agents[i].speed, *g.est, s[i], nu[i], gains);
          if (!(gains.anti_windup && cmd.saturated)) {
            nu[i] = nu_step(nu[i], s[i], gains.lambda2, dt, gains.sign_smoothing);
          }
        } catch (const SpeedRatioViolation&) {
          cmd = pursuit_command(agents[i].speed, *g.est, gains.max_accel);
        }
      } else if (g.est) {
        cmd = pursuit_command(agents[i].speed, *g.est, gains.max_accel);
      }
      agents[i].lateral_accel = cmd.accel;
      result.max_abs_command = std::max(result.max_abs_command, std::abs(cmd.accel));

      AgentSample& smp = row.agents[i];
      smp = sample_of(agents[i], target, z_hat.row(i).transpose());
      smp.est_deviation = g.est ? g.est->rel.deviation : kNaN;
      smp.tgo = exchanging[i] ? tgo[i] : kNaN;
      smp.s = s[i];
      smp.nu = nu[i];
      smp.accel = cmd.accel;
    }
    for (int i = 0; i < n; ++i) {
      worst_error = std::max(worst_error, (z_hat.row(i).transpose() - target.z).norm());
    }
    if (!result.observer_settling_time && worst_error < scenario.settle_threshold) {
      result.observer_settling_time = time;
    }
    out.telemetry.push_back(std::move(row));

    // Observer and kinematics over [t, t + dt].
    const EstimateMatrix previous_z_hat = z_hat;
    z_hat = observer_step(sensing, scenario.observer, z_hat, target.z, dt);
    const TargetState previous_target = target;
    const std::vector<InterceptorState> previous_agents = agents;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      agents[i] = step_kinematics(agents[i], target, agents[i].lateral_accel, dt).first;
    }
    target = propagate_target(target, dt);
    const double next_time = static_cast<double>(step + 1) * dt;

    // Interception events.
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const double r = true_range(agents[i], target);
      closest[i] = std::min(closest[i], r);
      AgentOutcome& outcome = result.agents[i];
      if (r < scenario.capture_radius) {
        outcome = {true, next_time, r, true};
      } else if (r > prev_range[i] && prev_range[i] < scenario.miss_radius) {
        agents[i] = previous_agents[i];
        outcome = {true, time, prev_range[i], false};
      } else {
        prev_range[i] = r;
        continue;
      }
      const TargetState& at = outcome.captured ? target : previous_target;
      const EstimateMatrix& est = outcome.captured ? z_hat : previous_z_hat;
      frozen[i] = sample_of(agents[i], at, est.row(i).transpose());
      frozen[i].tgo = 0.0;
      frozen[i].nu = nu[i];
      frozen[i].est_deviation = out.telemetry.back().agents[i].est_deviation;
      frozen[i].active = false;
      active[i] = false;
      --remaining;
    }
    time = next_time;
  }

  // Closing row with the frozen (or timed-out) state.
  TelemetryRow last;
  last.time = time;
  last.agents.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    last.agents[i] = active[i] ? sample_of(agents[i], target, z_hat.row(i).transpose())
                               : frozen[i];
    if (active[i]) last.agents[i].nu = nu[i];
  }
  out.telemetry.push_back(std::move(last));

  result.final_time = time;
  result.consensus_time = consensus.consensus_time();
  result.termination = remaining == 0 ? Termination::AllIntercepted
                                      : Termination::TimedOut;
  for (int i = 0; i < n; ++i) {
    if (!result.agents[i].intercepted) result.agents[i].miss_distance = closest[i];
  }
  double first = std::numeric_limits<double>::infinity();
  double final = -first;
  for (const auto& a : result.agents) {
    if (!a.intercepted) continue;
    first = std::min(first, a.time);
    final = std::max(final, a.time);
  }
  result.salvo_spread = final >= first ? final - first : 0.0;
  return out;
}

}  // namespace salvo
