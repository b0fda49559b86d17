// Parameter sweeps over a scenario template, run in parallel.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "salvo/sim.hpp"

namespace salvo {

struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

/// Cartesian product of axes. No axes means no runs.
struct SweepSpec {
  std::vector<SweepAxis> axes;

  /// "dt=0.002,0.001;seed=1..10". Integer ranges a..b are inclusive.
  /// Throws ConfigError on malformed text or unknown keys.
  static SweepSpec parse(const std::string& text);

  std::size_t size() const;
  /// Parameter assignments of run `index` in row-major order.
  std::vector<std::pair<std::string, double>> point(std::size_t index) const;
};

/// Keys accepted by apply_parameter.
const std::vector<std::string>& sweep_keys();

/// Overrides one scenario field. Throws ConfigError for unknown keys.
void apply_parameter(Scenario& scenario, const std::string& key, double value);

struct BatchEntry {
  std::vector<std::pair<std::string, double>> parameters;
  std::optional<RunResult> result;
  std::string error;  // set when the run threw
};

/// One entry per sweep point, in sweep order regardless of scheduling.
/// threads <= 0 uses the hardware concurrency.
std::vector<BatchEntry> run_batch(const Scenario& base, const SweepSpec& sweep,
                                  int threads = 0);

/// Sweep crossed with observer seeds.
std::vector<BatchEntry> run_batch(const Scenario& base, const SweepSpec& sweep,
                                  const std::vector<std::uint64_t>& seeds,
                                  int threads = 0);

}  // namespace salvo
