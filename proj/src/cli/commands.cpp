#include "onebit/cli.hpp"

#include "onebit/array_model.hpp"
#include "onebit/csv.hpp"
#include "onebit/detector.hpp"
#include "onebit/errors.hpp"
#include "onebit/gaussian_moments.hpp"
#include "onebit/montecarlo.hpp"
#include "onebit/onebit_moments.hpp"
#include "onebit/orthant.hpp"
#include "onebit/parallel.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace onebit::cli {

namespace {

const std::vector<double> kFigureSnrs = {-15.0, -18.0, -21.0, -24.0};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_common(const RunParams& p) {
  require(p.sensors >= 1, "--sensors must be >= 1");
  require(p.zeta_deg >= -90.0 && p.zeta_deg <= 90.0, "--zeta must lie in [-90, 90] degrees");
  require(p.snapshots >= 1, "--snapshots must be >= 1");
  require(p.threads >= 0, "--threads must be >= 0");
  require(p.gamma0 >= 0.0, "--gamma0 must be >= 0");
  for (double pfa : p.pfa) require(pfa > 0.0 && pfa < 1.0, "--pfa values must lie in (0, 1)");
}

struct PointDesigns {
  DetectorDesign onebit;
  std::optional<DetectorDesign> gaussian;
  StatMoments h1_moments;
};

PointDesigns design_point(int sensors, double zeta_deg, double gamma0, double gamma1, long snapshots,
                          bool with_gaussian, OrthantEvaluator& evaluator, int threads) {
  const auto array = ArrayConfig<double>::from_degrees(sensors, zeta_deg);
  const auto steering = build_steering(array);
  const auto cov0 = receive_covariance(steering, gamma0);
  const auto cov1 = receive_covariance(steering, gamma1);
  const StatSelector selector(array.channels());
  MomentOptions options;
  options.evaluator = &evaluator;
  options.threads = threads;
  const StatMoments m0 = onebit_stat_moments(cov0, selector, options);
  StatMoments m1 = onebit_stat_moments(cov1, selector, options);
  PointDesigns out{onebit_design(m0, m1, snapshots), std::nullopt, std::move(m1)};
  if (with_gaussian)
    out.gaussian = gaussian_design(gaussian_stat_moments(cov0), gaussian_stat_moments(cov1), snapshots);
  return out;
}

std::string describe_design(const std::string& label, const DetectorDesign& d, const std::vector<double>& pfas) {
  std::ostringstream os;
  const RocCurve roc = roc_quality(d);
  os << "  " << label << ": mu0=" << format_number(d.mu0) << " sigma0=" << format_number(d.sigma0())
     << " mu1=" << format_number(d.mu1) << " sigma1=" << format_number(d.sigma1()) << "\n";
  for (double pfa : pfas) {
    const RateResult r = asymptotic_rates(d, pfa);
    os << "    P_FA=" << format_number(pfa) << "  threshold=" << format_number(r.threshold)
       << "  P_D=" << format_number(r.pd) << "\n";
  }
  const auto db = chi_db(roc.chi);
  os << "    chi=" << format_number(roc.chi) << "  chi_dB=" << (db ? format_number(*db) : std::string("n/a")) << "\n";
  return os.str();
}

std::vector<double> time_grid(const RunParams& p) {
  require(p.time_min_ms > 0.0 && p.time_max_ms >= p.time_min_ms && p.time_step_ms > 0.0,
          "time range must satisfy 0 < --time-min <= --time-max and --time-step > 0");
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double t = p.time_min_ms + static_cast<double>(i) * p.time_step_ms;
    if (t > p.time_max_ms * (1.0 + 1e-12)) break;
    grid.push_back(t);
  }
  return grid;
}

}  // namespace

long snapshots_for_time(double t_ms) {
  require(t_ms > 0.0, "observation time must be positive");
  return std::max(1L, static_cast<long>(std::floor(kSnapshotsPerMs * t_ms + 0.5)));
}

RunParams defaults_for(const std::string& command) {
  RunParams p;
  p.command = command;
  if (command == "analyze") {
    p.sensors = 8;
    p.zeta_deg = 15.0;
    p.snapshots = 100;
    p.pfa = {1e-3};
  } else if (command == "sweep-sensors") {
    p.zeta_deg = 45.0;
    p.snapshots = 2046;
    p.snr_db = kFigureSnrs;
  } else if (command == "sweep-time") {
    p.sensors = 8;
    p.zeta_deg = 30.0;
    p.snr_db = kFigureSnrs;
  } else if (command == "validate") {
    p.sensors = 8;
    p.zeta_deg = 15.0;
    p.snapshots = 100;
    p.pfa = {1e-3, 1e-4};
    for (int snr = -19; snr <= -5; ++snr) p.snr_db.push_back(snr);
    p.trials = 100000;
    p.seed = 1;
  } else {
    throw std::invalid_argument("unknown command: " + command);
  }
  return p;
}

CommandOutput cmd_analyze(const RunParams& p) {
  check_common(p);
  require(p.gamma1.has_value() || !p.snr_db.empty(), "analyze needs --snr or --gamma1");
  require(!p.pfa.empty(), "analyze needs at least one --pfa");
  std::vector<double> gammas;
  std::vector<std::optional<double>> snrs;
  if (p.gamma1) {
    require(*p.gamma1 >= 0.0, "--gamma1 must be >= 0");
    gammas.push_back(*p.gamma1);
    snrs.emplace_back(std::nullopt);
  } else {
    for (double snr : p.snr_db) {
      gammas.push_back(gamma_from_snr_db(snr));
      snrs.emplace_back(snr);
    }
  }

  OrthantEvaluator evaluator;
  CsvWriter csv({"detector", "snr_db", "gamma0", "gamma1", "snapshots", "mu0", "sigma0", "mu1", "sigma1", "pfa",
                 "threshold", "pd", "chi", "chi_db"});
  std::ostringstream report;
  report << "S=" << p.sensors << " zeta=" << format_number(p.zeta_deg) << "deg K=" << p.snapshots << "\n";
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const PointDesigns d = design_point(p.sensors, p.zeta_deg, p.gamma0, gammas[g], p.snapshots,
                                        p.benchmark_gaussian, evaluator, p.threads);
    report << "gamma0=" << format_number(p.gamma0) << " gamma1=" << format_number(gammas[g]);
    if (snrs[g]) report << " (SNR " << format_number(*snrs[g]) << " dB)";
    report << "\n" << describe_design("1-bit", d.onebit, p.pfa);
    if (d.h1_moments.ill_conditioned)
      report << "  warning: statistic covariance near singular (min eigenvalue "
             << format_number(d.h1_moments.min_eigenvalue) << ")\n";
    if (d.gaussian) report << describe_design("gaussian", *d.gaussian, p.pfa);

    auto emit = [&](const std::string& label, const DetectorDesign& design) {
      const double chi = roc_quality(design).chi;
      for (double pfa : p.pfa) {
        const RateResult r = asymptotic_rates(design, pfa);
        csv.field(label).field(snrs[g]).field(p.gamma0).field(gammas[g]).field(design.snapshots)
            .field(design.mu0).field(design.sigma0()).field(design.mu1).field(design.sigma1())
            .field(pfa).field(r.threshold).field(r.pd).field(chi).field(chi_db(chi));
        csv.end_row();
      }
    };
    emit("onebit", d.onebit);
    if (d.gaussian) emit("gaussian", *d.gaussian);
  }
  return {csv.str(), report.str()};
}

CommandOutput cmd_sweep_sensors(const RunParams& p) {
  check_common(p);
  require(p.sensors_min >= 1 && p.sensors_max >= p.sensors_min, "need 1 <= --sensors-min <= --sensors-max");
  require(!p.snr_db.empty(), "sweep-sensors needs at least one --snr");

  struct Point {
    int sensors;
    double snr;
  };
  std::vector<Point> points;
  for (double snr : p.snr_db)
    for (int s = p.sensors_min; s <= p.sensors_max; ++s) points.push_back({s, snr});

  OrthantEvaluator evaluator;
  std::vector<double> chi(points.size()), chi_gauss(points.size());
  parallel_for(static_cast<long>(points.size()), p.threads, [&](long i) {
    const PointDesigns d = design_point(points[i].sensors, p.zeta_deg, p.gamma0, gamma_from_snr_db(points[i].snr),
                                        p.snapshots, p.benchmark_gaussian, evaluator, 1);
    chi[i] = roc_quality(d.onebit).chi;
    if (d.gaussian) chi_gauss[i] = roc_quality(*d.gaussian).chi;
  });

  std::vector<std::string> header = {"S", "snr_db", "chi", "chi_db"};
  if (p.benchmark_gaussian) header.insert(header.end(), {"chi_gaussian", "chi_gaussian_db"});
  CsvWriter csv(header);
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv.field(points[i].sensors).field(points[i].snr).field(chi[i]).field(chi_db(chi[i]));
    if (p.benchmark_gaussian) csv.field(chi_gauss[i]).field(chi_db(chi_gauss[i]));
    csv.end_row();
  }
  return {csv.str(), {}};
}

CommandOutput cmd_sweep_time(const RunParams& p) {
  check_common(p);
  require(!p.snr_db.empty(), "sweep-time needs at least one --snr");
  const std::vector<double> times = time_grid(p);

  // The statistic moments do not depend on K: one design per SNR, re-scaled per time.
  OrthantEvaluator evaluator;
  std::vector<std::optional<PointDesigns>> slots(p.snr_db.size());
  parallel_for(static_cast<long>(p.snr_db.size()), p.threads, [&](long i) {
    slots[i] = design_point(p.sensors, p.zeta_deg, p.gamma0, gamma_from_snr_db(p.snr_db[i]), 1,
                            p.benchmark_gaussian, evaluator, 1);
  });

  std::vector<std::string> header = {"t_ms", "K", "snr_db", "chi", "chi_db"};
  if (p.benchmark_gaussian) header.insert(header.end(), {"chi_gaussian", "chi_gaussian_db"});
  CsvWriter csv(header);
  for (std::size_t s = 0; s < p.snr_db.size(); ++s) {
    for (double t : times) {
      const long k = snapshots_for_time(t);
      const double chi = roc_quality(slots[s]->onebit.with_snapshots(k)).chi;
      csv.field(t).field(k).field(p.snr_db[s]).field(chi).field(chi_db(chi));
      if (p.benchmark_gaussian) {
        const double cg = roc_quality(slots[s]->gaussian->with_snapshots(k)).chi;
        csv.field(cg).field(chi_db(cg));
      }
      csv.end_row();
    }
  }
  return {csv.str(), {}};
}

CommandOutput cmd_validate(const RunParams& p) {
  check_common(p);
  require(p.trials >= 1, "--trials must be >= 1");
  require(!p.snr_db.empty(), "validate needs at least one --snr");
  require(!p.pfa.empty(), "validate needs at least one --pfa");

  const auto array = ArrayConfig<double>::from_degrees(p.sensors, p.zeta_deg);
  const StatSelector selector(array.channels());
  OrthantEvaluator evaluator;
  CsvWriter csv({"snr_db", "pfa", "pd_analytic", "pd_empirical", "ci_low", "ci_high", "seed"});
  for (double snr : p.snr_db) {
    const double gamma1 = gamma_from_snr_db(snr);
    const PointDesigns d = design_point(p.sensors, p.zeta_deg, p.gamma0, gamma1, p.snapshots, false, evaluator,
                                        p.threads);
    SimConfig sim;
    sim.trials = p.trials;
    sim.snapshots = p.snapshots;
    sim.seed = p.seed;
    sim.gamma = gamma1;
    sim.threads = p.threads;
    const TrialOutcome h1 = run_trials(array, d.onebit.weights, selector, sim, 0.0);
    for (double pfa : p.pfa) {
      const RateResult r = asymptotic_rates(d.onebit, pfa);
      const TrialOutcome decided = decide(h1.statistics, r.threshold);
      csv.field(snr).field(pfa).field(r.pd).field(decided.rate).field(decided.wilson.low)
          .field(decided.wilson.high).field(std::to_string(p.seed));
      csv.end_row();
    }
  }
  return {csv.str(), {}};
}

CommandOutput dispatch(const RunParams& params) {
  if (params.command == "analyze") return cmd_analyze(params);
  if (params.command == "sweep-sensors") return cmd_sweep_sensors(params);
  if (params.command == "sweep-time") return cmd_sweep_time(params);
  if (params.command == "validate") return cmd_validate(params);
  throw std::invalid_argument("unknown command: " + params.command);
}

}  // namespace onebit::cli
