#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace oscdecay {

inline constexpr const char* kToolName = "oscdecay";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "oscdecay-report/1";

/// Every knob a run can depend on, with its default. Reports echo the full
/// resolved config so a run can be replayed from its own report.
struct RunConfig {
  std::string command;  // analyze | verify | table
  std::string phase;
  int dim = 1;
  double support = 0.5;        // cutoff half-width r
  std::string domain = "ball";  // shift sampling domain: ball | box
  std::uint64_t seed = 42;
  double eps_min = 1e-6;
  double eps_max = 1e-1;
  int eps_steps = 6;
  std::uint64_t samples = 200000;
  int grid = 8;
  std::string family = "scaled-box";  // scaled-box | aniso-box | gaussian |
                                      // custom-box
  std::vector<double> widths;         // custom-box side widths
  std::vector<double> scales;         // custom-box per-side lambda exponents
  double lambda_min = 1e2;
  double lambda_max = 1e5;
  int lambda_steps = 8;
  std::uint64_t qmc_points = 1u << 20;
  int replicates = 8;
  std::string cutoff = "bump";  // bump | one
};

/// Serialize the full config (stable key order).
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// Overlay keys from a partial JSON object onto `config`. Unknown keys and
/// wrong types raise invalid_argument errors.
void apply_config_json(RunConfig& config, const nlohmann::json& overlay);

/// Run the requested command and build the full JSON report.
nlohmann::ordered_json run_analyze(const RunConfig& config);
nlohmann::ordered_json run_verify(const RunConfig& config);
nlohmann::ordered_json run_table(const RunConfig& config);

/// Dispatch on config.command.
nlohmann::ordered_json run_command(const RunConfig& config);

/// Render a report as CSV (layout depends on the command that produced it).
std::string report_to_csv(const nlohmann::ordered_json& report);

/// Shortest round-trip decimal form of a double (matches JSON output).
std::string format_double(double v);

}  // namespace oscdecay
