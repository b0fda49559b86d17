// Scenario documents (JSON, degrees), CSV telemetry and JSON run summaries.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "salvo/sim.hpp"

namespace salvo {

inline constexpr int kScenarioVersion = 1;
inline constexpr int kSummaryVersion = 1;
inline constexpr int kTelemetryVersion = 1;

/// Parses and fully validates a scenario document. Throws ParseError listing
/// every problem with its JSON path.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario parse_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& scenario);

/// CSV header for n agents: time_s, then per agent i (1-based) the columns
/// x_i, y_i, gamma_deg_i, r_i, theta_deg_i, delta_deg_i, delta_hat_deg_i,
/// tgo_i, s_i, nu_i, a_cmd_i, zerr_i.
std::string telemetry_header(int agents);

/// Writes rows whose time is a multiple of `interval` (plus the last row) in
/// 9 significant digits with LF line endings.
void write_telemetry(std::ostream& out, const std::vector<TelemetryRow>& rows,
                     int agents, double interval);

/// Same, to a file. Throws SalvoError naming the path on I/O failure.
void write_telemetry(const std::filesystem::path& path,
                     const std::vector<TelemetryRow>& rows, int agents,
                     double interval);

nlohmann::json summary_to_json(const RunResult& result);
RunResult summary_from_json(const nlohmann::json& doc);

void write_summary(const std::filesystem::path& path, const RunResult& result);

std::string to_string(Termination termination);

}  // namespace salvo
