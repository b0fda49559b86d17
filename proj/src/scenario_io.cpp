#include "salvo/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "salvo/errors.hpp"

namespace salvo {

using nlohmann::json;

namespace {

// Collects every problem in a document instead of stopping at the first.
class Reader {
 public:
  std::vector<ParseError::Issue> issues;

  void fail(const std::string& path, const std::string& message) {
    issues.push_back({path, message});
  }

  bool object(const json& node, const std::string& path,
              const std::set<std::string>& allowed) {
    if (!node.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : node.items()) {
      if (!allowed.count(key)) fail(path + "/" + key, "unknown field");
    }
    return true;
  }

  const json* field(const json& node, const std::string& path,
                    const std::string& key, bool required) {
    if (!node.is_object()) return nullptr;
    auto it = node.find(key);
    if (it == node.end()) {
      if (required) fail(path + "/" + key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& node, const std::string& path,
                const std::string& key, double fallback, bool required = true) {
    const json* v = field(node, path, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      fail(path + "/" + key, "expected a number");
      return fallback;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(path + "/" + key, "must be finite");
    return x;
  }

  double optional_number(const json& node, const std::string& path,
                         const std::string& key, double fallback) {
    return number(node, path, key, fallback, false);
  }

  std::vector<double> numbers(const json& node, const std::string& path,
                              const std::string& key, std::size_t count,
                              bool required = true) {
    const json* v = field(node, path, key, required);
    if (!v) return {};
    if (!v->is_array() || v->size() != count) {
      fail(path + "/" + key, "expected an array of " + std::to_string(count) +
                                 " numbers");
      return {};
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      if (!(*v)[i].is_number()) {
        fail(path + "/" + key + "/" + std::to_string(i), "expected a number");
        return {};
      }
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  std::vector<Edge> edges(const json& doc, const std::string& key) {
    const std::string path = "/" + key;
    const json* v = field(doc, "", key, true);
    if (!v) return {};
    if (!v->is_array()) {
      fail(path, "expected an array of [from, to] pairs");
      return {};
    }
    std::vector<Edge> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        fail(path + "/" + std::to_string(i), "expected [from, to] integers");
        continue;
      }
      out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
  }
};

}  // namespace

Scenario scenario_from_json(const json& doc) {
  Reader rd;
  Scenario sc;
  if (!rd.object(doc, "", {"version", "name", "target", "interceptors",
                           "sensing_edges", "actuation_edges", "observer",
                           "guidance", "simulation"})) {
    throw ParseError(rd.issues);
  }

  if (const json* v = rd.field(doc, "", "version", true)) {
    if (!v->is_number_integer() || v->get<int>() != kScenarioVersion) {
      rd.fail("/version", "unsupported version (expected " +
                              std::to_string(kScenarioVersion) + ")");
    }
  }
  if (const json* v = rd.field(doc, "", "name", false)) {
    if (v->is_string()) {
      sc.name = v->get<std::string>();
    } else {
      rd.fail("/name", "expected a string");
    }
  }

  if (const json* t = rd.field(doc, "", "target", true);
      t && rd.object(*t, "/target", {"position_m", "speed_mps", "heading_deg"})) {
    const auto pos = rd.numbers(*t, "/target", "position_m", 2);
    if (pos.size() == 2) {
      sc.target.x = pos[0];
      sc.target.y = pos[1];
    }
    sc.target.speed = rd.number(*t, "/target", "speed_mps", 0.0);
    if (sc.target.speed < 0.0) rd.fail("/target/speed_mps", "must be >= 0");
    sc.target.heading = rd.number(*t, "/target", "heading_deg", 0.0) * kDegToRad;
  }

  if (const json* list = rd.field(doc, "", "interceptors", true)) {
    if (!list->is_array() || list->empty()) {
      rd.fail("/interceptors", "expected a non-empty array");
    } else {
      for (std::size_t i = 0; i < list->size(); ++i) {
        const std::string path = "/interceptors/" + std::to_string(i);
        const json& node = (*list)[i];
        InterceptorSpec spec;
        if (rd.object(node, path, {"position_m", "speed_mps", "heading_deg",
                                   "initial_estimate"})) {
          const auto pos = rd.numbers(node, path, "position_m", 2);
          if (pos.size() == 2) {
            spec.x = pos[0];
            spec.y = pos[1];
          }
          spec.speed = rd.number(node, path, "speed_mps", 0.0);
          spec.heading = rd.number(node, path, "heading_deg", 0.0) * kDegToRad;
          const auto est = rd.numbers(node, path, "initial_estimate", 4, false);
          if (est.size() == 4) spec.initial_estimate << est[0], est[1], est[2], est[3];
          if (!(spec.speed > sc.target.speed)) {
            rd.fail(path + "/speed_mps",
                    "speed-ratio constraint violated: interceptor speed must "
                    "exceed target speed (V_M^2 - V_T^2 > 0)");
          }
        }
        sc.interceptors.push_back(spec);
      }
    }
  }

  sc.sensing_edges = rd.edges(doc, "sensing_edges");
  sc.actuation_edges = rd.edges(doc, "actuation_edges");

  if (const json* o = rd.field(doc, "", "observer", true);
      o && rd.object(*o, "/observer",
                     {"k1", "k2", "k3", "alpha", "beta", "seed",
                      "seeker_position_perturbation_m",
                      "seeker_velocity_perturbation_mps"})) {
    sc.observer.k1 = rd.number(*o, "/observer", "k1", 0.0);
    sc.observer.k2 = rd.number(*o, "/observer", "k2", 0.0);
    sc.observer.k3 = rd.number(*o, "/observer", "k3", 0.0);
    sc.observer.alpha = rd.number(*o, "/observer", "alpha", 0.0);
    sc.observer.beta = rd.number(*o, "/observer", "beta", 0.0);
    if (const json* seed = rd.field(*o, "/observer", "seed", false)) {
      if (seed->is_number_unsigned()) {
        sc.observer_init.seed = seed->get<std::uint64_t>();
      } else {
        rd.fail("/observer/seed", "expected a non-negative integer");
      }
    }
    sc.observer_init.position_perturbation = rd.optional_number(
        *o, "/observer", "seeker_position_perturbation_m",
        sc.observer_init.position_perturbation);
    sc.observer_init.velocity_perturbation = rd.optional_number(
        *o, "/observer", "seeker_velocity_perturbation_mps",
        sc.observer_init.velocity_perturbation);
    try {
      sc.observer.validate();
    } catch (const ConfigError& e) {
      rd.fail("/observer", e.what());
    }
  }

  if (const json* g = rd.field(doc, "", "guidance", true);
      g && rd.object(*g, "/guidance", {"lambda1", "lambda2", "max_accel_g",
                                       "anti_windup", "sign_smoothing"})) {
    sc.guidance.lambda1 = rd.number(*g, "/guidance", "lambda1", 0.0);
    sc.guidance.lambda2 = rd.number(*g, "/guidance", "lambda2", 0.0);
    sc.guidance.max_accel = rd.number(*g, "/guidance", "max_accel_g", 0.0) * kGravity;
    sc.guidance.sign_smoothing =
        rd.optional_number(*g, "/guidance", "sign_smoothing", 0.0);
    if (const json* aw = rd.field(*g, "/guidance", "anti_windup", false)) {
      if (aw->is_boolean()) {
        sc.guidance.anti_windup = aw->get<bool>();
      } else {
        rd.fail("/guidance/anti_windup", "expected a boolean");
      }
    }
    try {
      sc.guidance.validate();
    } catch (const ConfigError& e) {
      rd.fail("/guidance", e.what());
    }
  }

  if (const json* s = rd.field(doc, "", "simulation", false);
      s && rd.object(*s, "/simulation",
                     {"dt_s", "max_time_s", "capture_radius_m", "miss_radius_m",
                      "telemetry_interval_s", "consensus_threshold_s",
                      "consensus_window_s", "observer_settle_threshold"})) {
    const std::string p = "/simulation";
    sc.dt = rd.optional_number(*s, p, "dt_s", sc.dt);
    sc.max_time = rd.optional_number(*s, p, "max_time_s", sc.max_time);
    sc.capture_radius = rd.optional_number(*s, p, "capture_radius_m", sc.capture_radius);
    sc.miss_radius = rd.optional_number(*s, p, "miss_radius_m", sc.miss_radius);
    sc.telemetry_interval =
        rd.optional_number(*s, p, "telemetry_interval_s", sc.telemetry_interval);
    sc.consensus_threshold =
        rd.optional_number(*s, p, "consensus_threshold_s", sc.consensus_threshold);
    sc.consensus_window =
        rd.optional_number(*s, p, "consensus_window_s", sc.consensus_window);
    sc.settle_threshold =
        rd.optional_number(*s, p, "observer_settle_threshold", sc.settle_threshold);
  }

  if (rd.issues.empty()) {
    try {
      sc.validate();
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      const bool topology = what.find("edge") != std::string::npos ||
                            what.find("spanning") != std::string::npos ||
                            what.find("self-loop") != std::string::npos ||
                            what.find("target cannot") != std::string::npos;
      const bool actuation = what.find("actuation") != std::string::npos;
      rd.fail(topology ? (actuation ? "/actuation_edges" : "/sensing_edges")
                       : "/simulation",
              what);
    }
  }
  if (!rd.issues.empty()) throw ParseError(rd.issues);
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError({{"", "cannot open " + path.string()}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError({{"", path.string() + ": malformed JSON: " + e.what()}});
  }
  return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["version"] = kScenarioVersion;
  doc["name"] = sc.name;
  doc["target"] = {{"position_m", {sc.target.x, sc.target.y}},
                   {"speed_mps", sc.target.speed},
                   {"heading_deg", sc.target.heading * kRadToDeg}};
  doc["interceptors"] = json::array();
  for (const auto& spec : sc.interceptors) {
    const auto& e = spec.initial_estimate;
    doc["interceptors"].push_back(
        {{"position_m", {spec.x, spec.y}},
         {"speed_mps", spec.speed},
         {"heading_deg", spec.heading * kRadToDeg},
         {"initial_estimate", {e[0], e[1], e[2], e[3]}}});
  }
  auto edges = [](const std::vector<Edge>& list) {
    json out = json::array();
    for (const auto& e : list) out.push_back({e.from, e.to});
    return out;
  };
  doc["sensing_edges"] = edges(sc.sensing_edges);
  doc["actuation_edges"] = edges(sc.actuation_edges);
  doc["observer"] = {
      {"k1", sc.observer.k1},
      {"k2", sc.observer.k2},
      {"k3", sc.observer.k3},
      {"alpha", sc.observer.alpha},
      {"beta", sc.observer.beta},
      {"seed", sc.observer_init.seed},
      {"seeker_position_perturbation_m", sc.observer_init.position_perturbation},
      {"seeker_velocity_perturbation_mps", sc.observer_init.velocity_perturbation}};
  doc["guidance"] = {{"lambda1", sc.guidance.lambda1},
                     {"lambda2", sc.guidance.lambda2},
                     {"max_accel_g", sc.guidance.max_accel / kGravity},
                     {"anti_windup", sc.guidance.anti_windup},
                     {"sign_smoothing", sc.guidance.sign_smoothing}};
  doc["simulation"] = {{"dt_s", sc.dt},
                       {"max_time_s", sc.max_time},
                       {"capture_radius_m", sc.capture_radius},
                       {"miss_radius_m", sc.miss_radius},
                       {"telemetry_interval_s", sc.telemetry_interval},
                       {"consensus_threshold_s", sc.consensus_threshold},
                       {"consensus_window_s", sc.consensus_window},
                       {"observer_settle_threshold", sc.settle_threshold}};
  return doc;
}

std::string telemetry_header(int agents) {
  static const char* const kColumns[] = {
      "x",   "y",  "gamma_deg", "r",  "theta_deg", "delta_deg", "delta_hat_deg",
      "tgo", "s",  "nu",        "a_cmd", "zerr"};
  std::string header = "time_s";
  for (int i = 1; i <= agents; ++i) {
    for (const char* c : kColumns) {
      header += ',';
      header += c;
      header += '_';
      header += std::to_string(i);
    }
  }
  return header;
}

namespace {

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, ",%.9g", v);
  line += buf;
}

bool on_cadence(double time, double interval) {
  const double k = std::round(time / interval);
  return std::abs(time - k * interval) < 1e-9;
}

}  // namespace

void write_telemetry(std::ostream& out, const std::vector<TelemetryRow>& rows,
                     int agents, double interval) {
  out << telemetry_header(agents) << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const TelemetryRow& row = rows[r];
    if (r + 1 != rows.size() && !on_cadence(row.time, interval)) continue;
    std::string line;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", row.time);
    line += buf;
    for (const AgentSample& a : row.agents) {
      put(line, a.x);
      put(line, a.y);
      put(line, a.heading * kRadToDeg);
      put(line, a.range);
      put(line, a.los * kRadToDeg);
      put(line, a.deviation * kRadToDeg);
      put(line, a.est_deviation * kRadToDeg);
      put(line, a.tgo);
      put(line, a.s);
      put(line, a.nu);
      put(line, a.accel);
      put(line, a.estimate_error);
    }
    out << line << '\n';
  }
}

void write_telemetry(const std::filesystem::path& path,
                     const std::vector<TelemetryRow>& rows, int agents,
                     double interval) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SalvoError("cannot open telemetry file " + path.string());
  write_telemetry(out, rows, agents, interval);
  out.flush();
  if (!out) throw SalvoError("failed writing telemetry file " + path.string());
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::AllIntercepted:
      return "all_intercepted";
    case Termination::TimedOut:
      return "timed_out";
    case Termination::NotRun:
      break;
  }
  return "not_run";
}

namespace {

Termination termination_from(const std::string& s) {
  if (s == "all_intercepted") return Termination::AllIntercepted;
  if (s == "timed_out") return Termination::TimedOut;
  if (s == "not_run") return Termination::NotRun;
  throw SalvoError("unknown termination reason '" + s + "'");
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

json summary_to_json(const RunResult& result) {
  json doc;
  doc["version"] = kSummaryVersion;
  doc["termination"] = to_string(result.termination);
  doc["final_time_s"] = result.final_time;
  doc["salvo_spread_s"] = result.salvo_spread;
  doc["consensus_time_s"] = optional_json(result.consensus_time);
  doc["observer_settling_time_s"] = optional_json(result.observer_settling_time);
  doc["max_abs_command_mps2"] = result.max_abs_command;
  doc["agents"] = json::array();
  for (const auto& a : result.agents) {
    doc["agents"].push_back({{"intercepted", a.intercepted},
                             {"captured", a.captured},
                             {"interception_time_s", a.time},
                             {"miss_distance_m", a.miss_distance}});
  }
  return doc;
}

RunResult summary_from_json(const json& doc) {
  if (doc.value("version", 0) != kSummaryVersion) {
    throw SalvoError("unsupported summary version");
  }
  RunResult r;
  r.termination = termination_from(doc.at("termination").get<std::string>());
  r.final_time = doc.at("final_time_s").get<double>();
  r.salvo_spread = doc.at("salvo_spread_s").get<double>();
  r.consensus_time = optional_from(doc.at("consensus_time_s"));
  r.observer_settling_time = optional_from(doc.at("observer_settling_time_s"));
  r.max_abs_command = doc.at("max_abs_command_mps2").get<double>();
  for (const auto& a : doc.at("agents")) {
    r.agents.push_back({a.at("intercepted").get<bool>(),
                        a.at("interception_time_s").get<double>(),
                        a.at("miss_distance_m").get<double>(),
                        a.at("captured").get<bool>()});
  }
  return r;
}

void write_summary(const std::filesystem::path& path, const RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SalvoError("cannot open summary file " + path.string());
  out << summary_to_json(result).dump(2) << '\n';
  out.flush();
  if (!out) throw SalvoError("failed writing summary file " + path.string());
}

}  // namespace salvo
