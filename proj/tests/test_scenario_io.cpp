#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "salvo/errors.hpp"
#include "salvo/scenario_io.hpp"

using namespace salvo;
using nlohmann::json;

namespace {

json bundled_doc(int k) {
  std::ifstream in(std::string(SALVO_SCENARIO_DIR) + "/scenario" + std::to_string(k) + ".json");
  return json::parse(in);
}

bool has_issue(const ParseError& e, const std::string& path) {
  for (const auto& issue : e.issues())
    if (issue.path == path) return true;
  return false;
}

ParseError parse_error_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("document was accepted");
  return ParseError({});
}

void check_close(const Scenario& a, const Scenario& b) {
  CHECK(a.name == b.name);
  CHECK(a.target.x == b.target.x);
  CHECK(a.target.speed == b.target.speed);
  CHECK(a.target.heading == doctest::Approx(b.target.heading).epsilon(1e-12));
  REQUIRE(a.interceptors.size() == b.interceptors.size());
  for (std::size_t i = 0; i < a.interceptors.size(); ++i) {
    CHECK(a.interceptors[i].x == b.interceptors[i].x);
    CHECK(a.interceptors[i].y == b.interceptors[i].y);
    CHECK(a.interceptors[i].speed == b.interceptors[i].speed);
    CHECK(a.interceptors[i].heading ==
          doctest::Approx(b.interceptors[i].heading).epsilon(1e-12));
    CHECK(a.interceptors[i].initial_estimate == b.interceptors[i].initial_estimate);
  }
  CHECK(a.sensing_edges == b.sensing_edges);
  CHECK(a.actuation_edges == b.actuation_edges);
  CHECK(a.observer == b.observer);
  CHECK(a.observer_init == b.observer_init);
  CHECK(a.guidance.lambda1 == b.guidance.lambda1);
  CHECK(a.guidance.max_accel == doctest::Approx(b.guidance.max_accel).epsilon(1e-12));
  CHECK(a.guidance.anti_windup == b.guidance.anti_windup);
  CHECK(a.dt == b.dt);
  CHECK(a.max_time == b.max_time);
  CHECK(a.capture_radius == b.capture_radius);
  CHECK(a.telemetry_interval == b.telemetry_interval);
}

}  // namespace

TEST_CASE("bundled first scenario") {
  const Scenario s = parse_scenario(SALVO_SCENARIO_DIR "/scenario1.json");
  CHECK(s.target.x == 14000);
  CHECK(s.target.y == 0);
  CHECK(s.target.speed == 500);
  CHECK(s.target.heading == doctest::Approx(120 * kDegToRad));
  const double speeds[] = {580, 590, 600, 580};
  const double headings[] = {15, 20, 30, 35};
  const double xs[] = {4500, 6000, 7000, 8000};
  REQUIRE(s.interceptors.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.interceptors[i].speed == speeds[i]);
    CHECK(s.interceptors[i].heading == doctest::Approx(headings[i] * kDegToRad));
    CHECK(s.interceptors[i].x == xs[i]);
    CHECK(s.interceptors[i].y == 0);
  }
  CHECK(s.observer.k1 == 0.9);
  CHECK(s.observer.k2 == 4);
  CHECK(s.observer.k3 == 5);
  CHECK(s.observer.alpha == 0.93);
  CHECK(s.observer.beta == 1.3);
  CHECK(s.guidance.lambda1 == 5);
  CHECK(s.guidance.lambda2 == 10);
  CHECK(s.guidance.max_accel == doctest::Approx(40 * 9.81));
  CHECK(s.dt == 1e-3);
}

TEST_CASE("bundled second scenario") {
  const Scenario s = parse_scenario(SALVO_SCENARIO_DIR "/scenario2.json");
  CHECK(s.target.heading == doctest::Approx(150 * kDegToRad));
  const double headings[] = {-15, -10, 20, 25};
  const double pos[][2] = {{6000, 500}, {6000, 1000}, {6500, -500}, {6500, -1000}};
  for (int i = 0; i < 4; ++i) {
    CHECK(s.interceptors[i].heading == doctest::Approx(headings[i] * kDegToRad));
    CHECK(s.interceptors[i].x == pos[i][0]);
    CHECK(s.interceptors[i].y == pos[i][1]);
  }
}

TEST_CASE("speed-ratio violation names the field") {
  json doc = bundled_doc(1);
  doc["interceptors"][1]["speed_mps"] = 400;
  const ParseError e = parse_error_of(doc);
  CHECK(has_issue(e, "/interceptors/1/speed_mps"));
  CHECK(std::string(e.what()).find("speed-ratio") != std::string::npos);
}

TEST_CASE("document errors are all reported with paths") {
  json doc = bundled_doc(1);
  doc.erase("version");
  doc["target"]["colour"] = "red";
  doc["observer"]["alpha"] = 1.5;
  doc["interceptors"][0]["position_m"] = {1, 2, 3};
  doc.erase("sensing_edges");
  const ParseError e = parse_error_of(doc);
  CHECK(has_issue(e, "/version"));
  CHECK(has_issue(e, "/target/colour"));
  CHECK(has_issue(e, "/observer"));
  CHECK(has_issue(e, "/interceptors/0/position_m"));
  CHECK(has_issue(e, "/sensing_edges"));
  CHECK(e.issues().size() >= 5);
}

TEST_CASE("topology problems are parse errors") {
  json doc = bundled_doc(1);
  doc["sensing_edges"] = json::array({{1, 2}, {1, 3}, {1, 4}});
  CHECK(has_issue(parse_error_of(doc), "/sensing_edges"));
  doc = bundled_doc(1);
  doc["actuation_edges"] = json::array({{1, 1}});
  CHECK(has_issue(parse_error_of(doc), "/actuation_edges"));
  doc = bundled_doc(1);
  doc["version"] = 2;
  CHECK(has_issue(parse_error_of(doc), "/version"));
}

TEST_CASE("unreadable and malformed files") {
  CHECK_THROWS_AS(parse_scenario("/nonexistent/scenario.json"), ParseError);
  const auto path = std::filesystem::temp_directory_path() / "salvo_bad.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(parse_scenario(path), ParseError);
}

TEST_CASE("scenario round trip") {
  for (int k : {1, 2}) {
    const Scenario s = scenario_from_json(bundled_doc(k));
    check_close(scenario_from_json(scenario_to_json(s)), s);
  }
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario s = scenario_from_json(bundled_doc(1));
    s.name = "random" + std::to_string(trial);
    s.target.heading = (u(rng) - 0.5) * 2 * kPi;
    s.target.speed = 100 + 300 * u(rng);
    for (auto& m : s.interceptors) {
      m.heading = (u(rng) - 0.5) * 2 * kPi;
      m.speed = s.target.speed + 1 + 500 * u(rng);
      m.initial_estimate = Eigen::Vector4d::Random() * 1e4;
    }
    s.observer_init.seed = rng();
    s.guidance.anti_windup = u(rng) < 0.5;
    s.guidance.sign_smoothing = u(rng) * 0.01;
    s.dt = 1e-4 + 1e-3 * u(rng);
    const json doc = json::parse(scenario_to_json(s).dump());
    check_close(scenario_from_json(doc), s);
  }
}

TEST_CASE("telemetry CSV format") {
  CHECK(telemetry_header(1) ==
        "time_s,x_1,y_1,gamma_deg_1,r_1,theta_deg_1,delta_deg_1,delta_hat_deg_1,"
        "tgo_1,s_1,nu_1,a_cmd_1,zerr_1");

  SUBCASE("empty run is header only") {
    std::ostringstream out;
    write_telemetry(out, {}, 2, 0.01);
    CHECK(out.str() == telemetry_header(2) + "\n");
  }
  SUBCASE("cadence, precision and line endings") {
    std::vector<TelemetryRow> rows;
    for (int k = 0; k <= 25; ++k) {
      TelemetryRow row;
      row.time = k * 1e-3;
      AgentSample a;
      a.x = 1.0 / 3.0;
      a.heading = kPi / 2;
      row.agents.push_back(a);
      rows.push_back(row);
    }
    std::ostringstream out;
    write_telemetry(out, rows, 1, 0.01);
    const std::string text = out.str();
    CHECK(text.find('\r') == std::string::npos);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 1 + 3 + 1);  // header, 0, 0.01, 0.02, final 0.025
    CHECK(lines[1].rfind("0,0.333333333,0,90,", 0) == 0);
    CHECK(lines[4].rfind("0.025,", 0) == 0);
  }
}

TEST_CASE("summary round trip") {
  RunResult r;
  r.agents = {{true, 17.271, 3.25, true}, {true, 17.2712, 41.0, false}};
  r.consensus_time = 2.213;
  r.salvo_spread = 0.0002;
  r.final_time = 17.2712;
  r.max_abs_command = 392.4;
  r.termination = Termination::AllIntercepted;
  CHECK(summary_from_json(json::parse(summary_to_json(r).dump())) == r);

  RunResult empty;
  empty.termination = Termination::TimedOut;
  const json doc = summary_to_json(empty);
  CHECK(doc["termination"] == "timed_out");
  CHECK(doc["consensus_time_s"].is_null());
  CHECK(summary_from_json(doc) == empty);
}
