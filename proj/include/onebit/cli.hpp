#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace onebit::cli {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr double kSnapshotsPerMs = 2046.0;

struct RunParams {
  std::string command;
  int sensors = 8;
  int sensors_min = 2;
  int sensors_max = 20;
  double zeta_deg = 15.0;
  long snapshots = 100;
  std::vector<double> snr_db;
  double gamma0 = 0.0;
  std::optional<double> gamma1;  // overrides snr_db when set (analyze only)
  std::vector<double> pfa;
  long trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  double time_min_ms = 0.1;
  double time_max_ms = 10.0;
  double time_step_ms = 0.1;
  bool benchmark_gaussian = false;
  bool gnuplot = false;
  std::string out;
};

/// Per-command defaults.
RunParams defaults_for(const std::string& command);

struct CommandOutput {
  std::string csv;
  std::string report;  // human-readable summary (analyze)
};

CommandOutput cmd_analyze(const RunParams& params);
CommandOutput cmd_sweep_sensors(const RunParams& params);
CommandOutput cmd_sweep_time(const RunParams& params);
CommandOutput cmd_validate(const RunParams& params);
CommandOutput dispatch(const RunParams& params);

/// K = round-half-up(2046 * t_ms).
long snapshots_for_time(double t_ms);

nlohmann::json make_manifest(const RunParams& params);
RunParams params_from_manifest(const nlohmann::json& manifest);

/// Full command line front end. Exit codes: 0 success, 1 usage, 2 numerical.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onebit::cli
