#include "onebit/cli.hpp"

#include "onebit/montecarlo.hpp"
#include "onebit/orthant.hpp"

#include <chrono>
#include <ctime>
#include <stdexcept>

#ifndef ONEBIT_VERSION
#define ONEBIT_VERSION "0.0.0"
#endif

namespace onebit::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json make_manifest(const RunParams& p) {
  nlohmann::json params = {
      {"command", p.command},
      {"sensors", p.sensors},
      {"sensors_min", p.sensors_min},
      {"sensors_max", p.sensors_max},
      {"zeta_deg", p.zeta_deg},
      {"snapshots", p.snapshots},
      {"snr_db", p.snr_db},
      {"gamma0", p.gamma0},
      {"gamma1", p.gamma1 ? nlohmann::json(*p.gamma1) : nlohmann::json(nullptr)},
      {"pfa", p.pfa},
      {"trials", p.trials},
      {"seed", p.seed},
      {"threads", p.threads},
      {"time_min_ms", p.time_min_ms},
      {"time_max_ms", p.time_max_ms},
      {"time_step_ms", p.time_step_ms},
      {"benchmark_gaussian", p.benchmark_gaussian},
      {"gnuplot", p.gnuplot},
      {"out", p.out},
  };
  nlohmann::json policy = {
      {"snr_convention", "gamma = 10^(snr_db/20)"},
      {"orthant_abs_tolerance", OrthantPolicy::abs_tolerance},
      {"orthant_max_evaluations", OrthantPolicy::max_evaluations},
      {"orthant_clamp_tolerance", OrthantPolicy::clamp_tolerance},
      {"orthant_cache_grid", OrthantPolicy::key_grid},
      {"roc_v_max", 8.0},
      {"roc_quadrature", "composite Gauss-Legendre, 16 panels x 32 nodes"},
      {"ridge_policy", "eps = 1e-10 * trace / n, doubled up to 20 times"},
      {"csv_number_format", "12 significant digits"},
      {"snapshots_per_ms", kSnapshotsPerMs},
  };
  nlohmann::json manifest = {
      {"tool", "onebit-detect"},
      {"version", ONEBIT_VERSION},
      {"timestamp", utc_timestamp()},
      {"csv_schema_version", kCsvSchemaVersion},
      {"parameters", params},
      {"numerical_policy", policy},
      {"rng", {{"algorithm", kRngAlgorithm}, {"normal_transform", kNormalTransform}}},
  };
  if (p.command == "validate")
    manifest["assumptions"] = {"trials are per SNR point; only the H1 hypothesis is simulated and the same "
                               "trial streams (seed, trial index) are reused at every SNR point"};
  return manifest;
}

RunParams params_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.contains("parameters")) throw std::invalid_argument("manifest has no 'parameters' object");
  const nlohmann::json& j = manifest.at("parameters");
  RunParams p = defaults_for(j.at("command").get<std::string>());
  auto read = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  read("sensors", p.sensors);
  read("sensors_min", p.sensors_min);
  read("sensors_max", p.sensors_max);
  read("zeta_deg", p.zeta_deg);
  read("snapshots", p.snapshots);
  read("snr_db", p.snr_db);
  read("gamma0", p.gamma0);
  if (j.contains("gamma1") && !j.at("gamma1").is_null()) p.gamma1 = j.at("gamma1").get<double>();
  read("pfa", p.pfa);
  read("trials", p.trials);
  read("seed", p.seed);
  read("threads", p.threads);
  read("time_min_ms", p.time_min_ms);
  read("time_max_ms", p.time_max_ms);
  read("time_step_ms", p.time_step_ms);
  read("benchmark_gaussian", p.benchmark_gaussian);
  read("gnuplot", p.gnuplot);
  read("out", p.out);
  return p;
}

}  // namespace onebit::cli
