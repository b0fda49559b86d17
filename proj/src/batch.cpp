#include "salvo/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include "salvo/errors.hpp"

namespace salvo {

namespace {

using Setter = std::function<void(Scenario&, double)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dt", [](Scenario& s, double v) { s.dt = v; }},
      {"max_time", [](Scenario& s, double v) { s.max_time = v; }},
      {"capture_radius", [](Scenario& s, double v) { s.capture_radius = v; }},
      {"seed", [](Scenario& s, double v) {
         if (v < 0 || v != std::floor(v)) throw ConfigError("seed must be a non-negative integer");
         s.observer_init.seed = static_cast<std::uint64_t>(v);
       }},
      {"position_perturbation", [](Scenario& s, double v) { s.observer_init.position_perturbation = v; }},
      {"velocity_perturbation", [](Scenario& s, double v) { s.observer_init.velocity_perturbation = v; }},
      {"k1", [](Scenario& s, double v) { s.observer.k1 = v; }},
      {"k2", [](Scenario& s, double v) { s.observer.k2 = v; }},
      {"k3", [](Scenario& s, double v) { s.observer.k3 = v; }},
      {"alpha", [](Scenario& s, double v) { s.observer.alpha = v; }},
      {"beta", [](Scenario& s, double v) { s.observer.beta = v; }},
      {"lambda1", [](Scenario& s, double v) { s.guidance.lambda1 = v; }},
      {"lambda2", [](Scenario& s, double v) { s.guidance.lambda2 = v; }},
      {"max_accel_g", [](Scenario& s, double v) { s.guidance.max_accel = v * kGravity; }},
      {"sign_smoothing", [](Scenario& s, double v) { s.guidance.sign_smoothing = v; }},
      {"anti_windup", [](Scenario& s, double v) { s.guidance.anti_windup = v != 0.0; }},
      {"target_speed", [](Scenario& s, double v) { s.target.speed = v; }},
      {"target_heading_deg", [](Scenario& s, double v) { s.target.heading = v * kDegToRad; }},
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_number(const std::string& text, const std::string& key) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("sweep: bad value '" + text + "' for " + key);
  return v;
}

}  // namespace

const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_parameter(Scenario& scenario, const std::string& key, double value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown sweep parameter '" + key + "'");
  it->second(scenario, value);
}

SweepSpec SweepSpec::parse(const std::string& text) {
  SweepSpec spec;
  if (trim(text).empty()) return spec;
  for (const std::string& clause : split(text, ';')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep: expected key=values in '" + clause + "'");
    SweepAxis axis;
    axis.key = trim(std::string_view(clause).substr(0, eq));
    if (!setters().contains(axis.key))
      throw ConfigError("unknown sweep parameter '" + axis.key + "'");
    for (const std::string& item : split(std::string_view(clause).substr(eq + 1), ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        axis.values.push_back(parse_number(item, axis.key));
        continue;
      }
      const double lo = parse_number(trim(item.substr(0, dots)), axis.key);
      const double hi = parse_number(trim(item.substr(dots + 2)), axis.key);
      if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo || hi - lo > 1e6)
        throw ConfigError("sweep: range '" + item + "' must be ascending integers");
      for (double v = lo; v <= hi; v += 1.0) axis.values.push_back(v);
    }
    if (axis.values.empty()) throw ConfigError("sweep: no values for " + axis.key);
    spec.axes.push_back(std::move(axis));
  }
  return spec;
}

std::size_t SweepSpec::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<std::pair<std::string, double>> SweepSpec::point(std::size_t index) const {
  std::vector<std::pair<std::string, double>> p(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto& a = axes[k];
    p[k] = {a.key, a.values[index % a.values.size()]};
    index /= a.values.size();
  }
  return p;
}

std::vector<BatchEntry> run_batch(const Scenario& base, const SweepSpec& sweep,
                                  int threads) {
  const std::size_t total = sweep.size();
  std::vector<BatchEntry> entries(total);
  if (total == 0) return entries;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      BatchEntry& e = entries[i];
      e.parameters = sweep.point(i);
      try {
        Scenario s = base;
        for (const auto& [key, value] : e.parameters) apply_parameter(s, key, value);
        e.result = run(s).result;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
  };

  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, static_cast<int>(std::min<std::size_t>(total, 64)));
  std::vector<std::jthread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  return entries;
}

std::vector<BatchEntry> run_batch(const Scenario& base, const SweepSpec& sweep,
                                  const std::vector<std::uint64_t>& seeds,
                                  int threads) {
  SweepSpec grid = sweep;
  SweepAxis axis{"seed", {}};
  for (auto s : seeds) axis.values.push_back(static_cast<double>(s));
  grid.axes.push_back(std::move(axis));
  return run_batch(base, grid, threads);
}

}  // namespace salvo
