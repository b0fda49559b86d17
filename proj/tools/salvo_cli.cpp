// Command-line front end: simulate, check-graph, verify-tgo, observer-test, batch.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "salvo/batch.hpp"
#include "salvo/errors.hpp"
#include "salvo/graph.hpp"
#include "salvo/observer.hpp"
#include "salvo/scenario_io.hpp"
#include "salvo/sim.hpp"
#include "salvo/studies.hpp"

namespace fs = std::filesystem;
using namespace salvo;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string opt_time(const std::optional<double>& t) {
  return t ? fmt(*t) + " s" : std::string("none");
}

int cmd_simulate(const std::string& path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, std::optional<double> dt) {
  Scenario sc = parse_scenario(path);
  if (seed) sc.observer_init.seed = *seed;
  if (dt) sc.dt = *dt;
  sc.validate();

  const RunOutput out = run(sc);
  const RunResult& r = out.result;
  fs::create_directories(out_dir);
  const fs::path csv = fs::path(out_dir) / "telemetry.csv";
  const fs::path summary = fs::path(out_dir) / "summary.json";
  write_telemetry(csv, out.telemetry, static_cast<int>(sc.interceptors.size()),
                  sc.telemetry_interval);
  write_summary(summary, r);

  std::cout << "scenario      " << sc.name << "\n"
            << "termination   " << to_string(r.termination) << "\n"
            << "final time    " << fmt(r.final_time) << " s\n";
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    const AgentOutcome& a = r.agents[i];
    std::cout << "  I" << i + 1 << "  "
              << (a.intercepted ? "intercepted at " + fmt(a.time) + " s"
                                : std::string("not intercepted"))
              << "  miss " << fmt(a.miss_distance, 4) << " m\n";
  }
  std::cout << "salvo spread  " << fmt(r.salvo_spread, 4) << " s\n"
            << "consensus     " << opt_time(r.consensus_time) << "\n"
            << "observer      " << opt_time(r.observer_settling_time) << "\n"
            << "max |a_cmd|   " << fmt(r.max_abs_command, 5) << " m/s^2\n"
            << "wrote " << csv.string() << " and " << summary.string() << "\n";
  return r.termination == Termination::AllIntercepted ? kOk : kRuntime;
}

int cmd_check_graph(const std::string& path) {
  const Scenario sc = parse_scenario(path);
  const auto [sensing, actuation] =
      build_graphs(static_cast<int>(sc.interceptors.size()), sc.sensing_edges,
                   sc.actuation_edges);
  (void)actuation;
  bool ok = true;

  const bool tree = check_spanning_tree(sensing);
  std::cout << "spanning tree        " << (tree ? "yes" : "NO") << "\n";
  if (!tree) return kInvalid;

  const auto spectrum = follower_spectrum(sensing);
  std::cout << "follower spectrum   ";
  for (const auto& l : spectrum) {
    std::cout << " " << fmt(l.real());
    if (l.imag() != 0.0) std::cout << (l.imag() > 0 ? "+" : "") << fmt(l.imag()) << "i";
  }
  std::cout << "\nmin Re(lambda)       " << fmt(spectrum.front().real()) << "\n";

  const ScalingCertificate cert = scaling_certificate(sensing);
  std::cout << "scaling method       " << cert.method << "\n"
            << "lambda_m             " << fmt(cert.lambda_min, 9) << "\n"
            << "D_hat diagonal      ";
  for (double d : cert.scaled) std::cout << " " << fmt(d, 9);
  std::cout << "\nscaled min eig       " << fmt(cert.scaled_min_eig, 12)
            << (cert.valid ? "  (>= 2)" : "  (FAILED)") << "\n";
  ok = ok && cert.valid;

  if (cert.valid) {
    const SettlingBound b = settling_bound(sensing, sc.observer, cert);
    std::cout << "settling bound       "
              << (b.certified ? fmt(b.settling_time) + " s" : std::string("not certified"))
              << "  (k = " << fmt(b.k) << ", c_alpha = " << fmt(b.c_alpha)
              << ", c_beta = " << fmt(b.c_beta) << ")\n";
    if (!b.diagnostic.empty()) std::cout << "  " << b.diagnostic << "\n";
  }
  return ok ? kOk : kInvalid;
}

int cmd_verify_tgo(int trials, std::uint64_t seed) {
  const TgoStudy s = verify_time_to_go(trials, seed);
  double worst = 0.0;
  for (double e : s.errors) worst = std::max(worst, std::abs(e));
  std::cout << s.passed << "/" << trials << " within " << fmt(s.tolerance)
            << " s, worst |error| " << fmt(worst, 3) << " s\n";
  return s.passed == trials ? kOk : kInvalid;
}

int cmd_observer_test(const std::string& path, double scale, int trials) {
  const Scenario sc = parse_scenario(path);
  const auto graphs = build_graphs(static_cast<int>(sc.interceptors.size()),
                                   sc.sensing_edges, sc.actuation_edges);
  ObserverStudyOptions opt;
  opt.scale = scale;
  opt.trials = trials;
  opt.seed = sc.observer_init.seed;
  opt.dt = sc.dt;
  opt.settle_threshold = sc.settle_threshold;
  const TargetState target =
      TargetState::from_polar(sc.target.x, sc.target.y, sc.target.speed, sc.target.heading);
  const ObserverStudy st = observer_scaling_study(graphs.first, sc.observer, target, opt);

  double lo = INFINITY, hi = 0.0;
  for (const auto& t : st.trials) {
    lo = std::min(lo, t.settle_time);
    hi = std::max(hi, t.scaled_settle_time);
  }
  std::cout << st.trials.size() << " trials, errors x" << fmt(scale) << "\n"
            << "settling time range  " << fmt(lo) << " .. " << fmt(hi) << " s\n"
            << "worst ratio          " << fmt(st.worst_ratio) << "\n"
            << "Lyapunov decreasing  " << (st.all_lyapunov_decreasing ? "yes" : "NO") << "\n";
  return st.worst_ratio < 1.2 && st.all_lyapunov_decreasing ? kOk : kInvalid;
}

int cmd_batch(const std::string& path, const std::string& sweep_text, int threads) {
  const Scenario sc = parse_scenario(path);
  const SweepSpec sweep = SweepSpec::parse(sweep_text);
  const auto entries = run_batch(sc, sweep, threads);

  nlohmann::json out = nlohmann::json::array();
  int failures = 0;
  for (const BatchEntry& e : entries) {
    nlohmann::json item;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : e.parameters) params[k] = v;
    item["parameters"] = params;
    if (e.result) {
      item["summary"] = summary_to_json(*e.result);
    } else {
      item["error"] = e.error;
      ++failures;
    }
    out.push_back(item);
  }
  std::cout << out.dump(2) << "\n";
  return failures == 0 ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative salvo interception simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", sweep;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  int trials = 100, obs_trials = 50, threads = 0;
  std::uint64_t tgo_seed = 1;
  double scale = 10.0;

  auto* sim = app.add_subcommand("simulate", "Run one engagement and write telemetry");
  sim->add_option("scenario", scenario_path, "Scenario JSON")->required();
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_option("--seed", seed, "Override the observer initialisation seed");
  sim->add_option("--dt", dt, "Override the step size [s]");

  auto* graph = app.add_subcommand("check-graph", "Verify the sensing-graph certificates");
  graph->add_option("scenario", scenario_path, "Scenario JSON")->required();

  auto* tgo = app.add_subcommand("verify-tgo", "Time-to-go exactness oracle");
  tgo->add_option("--trials", trials, "Number of random engagements");
  tgo->add_option("--seed", tgo_seed, "Base seed");

  auto* obs = app.add_subcommand("observer-test", "Fixed-time observer scaling study");
  obs->add_option("scenario", scenario_path, "Scenario JSON")->required();
  obs->add_option("--scale", scale, "Initial-error scale factor");
  obs->add_option("--trials", obs_trials, "Number of seeded trials");

  auto* batch = app.add_subcommand("batch", "Parameter sweep, JSON summaries on stdout");
  batch->add_option("scenario", scenario_path, "Scenario JSON")->required();
  batch->add_option("--sweep", sweep, "e.g. \"dt=0.002,0.001;seed=1..10\"")->required();
  batch->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*sim) return cmd_simulate(scenario_path, out_dir, seed, dt);
    if (*graph) return cmd_check_graph(scenario_path);
    if (*tgo) return cmd_verify_tgo(trials, tgo_seed);
    if (*obs) return cmd_observer_test(scenario_path, scale, obs_trials);
    if (*batch) return cmd_batch(scenario_path, sweep, threads);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kInvalid;
}
