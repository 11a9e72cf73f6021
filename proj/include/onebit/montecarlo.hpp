#pragma once

// Seedable simulation of the quantized array: Gaussian snapshots through a
// Cholesky factor of R_y, sign quantization, and the detector statistic.
// Trial t always draws from Philox substream (seed, t), so outcomes do not
// depend on the number of worker threads.

#include "onebit/array_model.hpp"
#include "onebit/detector.hpp"
#include "onebit/onebit_moments.hpp"
#include "onebit/philox.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace onebit {

inline constexpr const char* kRngAlgorithm = "philox4x32-10, key=seed, counter=(block, trial)";
inline constexpr const char* kNormalTransform = "box-muller on 53-bit midpoint uniforms (cos then sin)";

struct SimConfig {
  long trials = 100000;
  long snapshots = 100;
  std::uint64_t seed = 1;
  /// Source amplitude of the hypothesis generating the data.
  double gamma = 0.0;
  int threads = 0;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval.
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

struct TrialOutcome {
  std::vector<double> statistics;  // one T per trial, in trial order
  long exceedances = 0;
  double rate = 0.0;               // exceedances / trials
  Interval wilson;
};

/// Fraction of stored statistics strictly above threshold, with its interval.
TrialOutcome decide(std::vector<double> statistics, double threshold);

/// count i.i.d. N(0, R_y) snapshots as columns.
Eigen::MatrixXd sample_snapshots(const ReceiveCovariance<double>& cov, long count, NormalStream& rng);

/// Element-wise sign with sign(0) = +1.
SignMatrix quantize(const Eigen::MatrixXd& snapshots);

/// Simulates config.trials independent trials and stores T for each.
TrialOutcome run_trials(const ArrayConfig<double>& array, const Eigen::VectorXd& weights,
                        const StatSelector& selector, const SimConfig& config, double threshold);

struct EmpiricalRates {
  TrialOutcome h0;
  TrialOutcome h1;
  double pfa_hat() const { return h0.rate; }
  double pd_hat() const { return h1.rate; }
};

EmpiricalRates empirical_rates(const ArrayConfig<double>& array, const DetectorDesign& design,
                               const StatSelector& selector, const SimConfig& sim0, const SimConfig& sim1,
                               double threshold);

/// Sample moments of phi(z) from `count` quantized snapshots, centred on a
/// reference mean so the second-moment estimate is unbiased for R_phi, with
/// entry-wise standard errors.
struct EmpiricalStatMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd mean_se;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd cov_se;
  long samples = 0;
};

EmpiricalStatMoments empirical_stat_moments(const ReceiveCovariance<double>& cov, const StatSelector& selector,
                                            const Eigen::VectorXd& reference_mean, long count, std::uint64_t seed,
                                            int threads = 0);

}  // namespace onebit
