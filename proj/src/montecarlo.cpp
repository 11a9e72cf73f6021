#include "onebit/montecarlo.hpp"

#include "onebit/errors.hpp"
#include "onebit/parallel.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onebit {

namespace {

Eigen::MatrixXd cholesky_factor(const ReceiveCovariance<double>& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov.matrix());
  if (llt.info() != Eigen::Success)
    throw NumericalError("sample_snapshots: receive covariance has no Cholesky factor");
  return llt.matrixL();
}

Eigen::MatrixXd draw(const Eigen::MatrixXd& factor, long count, NormalStream& rng) {
  Eigen::MatrixXd white(factor.rows(), count);
  // column by column so a snapshot consumes consecutive draws
  for (long k = 0; k < count; ++k)
    for (Eigen::Index m = 0; m < white.rows(); ++m) white(m, k) = rng.next();
  return factor.triangularView<Eigen::Lower>() * white;
}

Eigen::MatrixXd sign_of(const Eigen::MatrixXd& y) {
  return y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

// Upper-triangle weight matrix so that T = sum_{i<j} W_ij (Z Z^T)_ij / K.
Eigen::MatrixXd weight_matrix(const Eigen::VectorXd& weights, const StatSelector& selector) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(selector.channels(), selector.channels());
  for (int p = 0; p < selector.size(); ++p) {
    const auto [i, j] = selector.pair(p);
    w(i, j) = weights(p);
  }
  return w;
}

void check_sim(const SimConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
  if (config.snapshots < 1) throw std::invalid_argument("SimConfig: snapshots must be >= 1");
  if (!(config.gamma >= 0.0)) throw std::invalid_argument("SimConfig: gamma must be >= 0");
}

}  // namespace

Interval wilson_interval(long successes, long trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

TrialOutcome decide(std::vector<double> statistics, double threshold) {
  if (statistics.empty()) throw std::invalid_argument("decide: no trials");
  TrialOutcome out;
  out.exceedances = std::count_if(statistics.begin(), statistics.end(), [&](double t) { return t > threshold; });
  const long n = static_cast<long>(statistics.size());
  out.rate = static_cast<double>(out.exceedances) / static_cast<double>(n);
  out.wilson = wilson_interval(out.exceedances, n);
  out.statistics = std::move(statistics);
  return out;
}

Eigen::MatrixXd sample_snapshots(const ReceiveCovariance<double>& cov, long count, NormalStream& rng) {
  if (count < 1) throw std::invalid_argument("sample_snapshots: count must be >= 1");
  return draw(cholesky_factor(cov), count, rng);
}

SignMatrix quantize(const Eigen::MatrixXd& snapshots) {
  return snapshots.unaryExpr([](double v) -> signed char { return v >= 0.0 ? 1 : -1; });
}

TrialOutcome run_trials(const ArrayConfig<double>& array, const Eigen::VectorXd& weights,
                        const StatSelector& selector, const SimConfig& config, double threshold) {
  check_sim(config);
  if (selector.channels() != array.channels() || weights.size() != selector.size())
    throw std::invalid_argument("run_trials: dimension mismatch");
  const Eigen::MatrixXd factor = cholesky_factor(receive_covariance(array, config.gamma));
  const Eigen::MatrixXd w = weight_matrix(weights, selector);
  const double inv_k = 1.0 / static_cast<double>(config.snapshots);

  std::vector<double> stats(config.trials);
  constexpr long kBatch = 256;
  const long batches = (config.trials + kBatch - 1) / kBatch;
  parallel_for(batches, config.threads, [&](long batch) {
    const long end = std::min(config.trials, (batch + 1) * kBatch);
    for (long t = batch * kBatch; t < end; ++t) {
      NormalStream rng(config.seed, static_cast<std::uint64_t>(t));
      const Eigen::MatrixXd z = sign_of(draw(factor, config.snapshots, rng));
      const Eigen::MatrixXd gram = z * z.transpose();
      stats[t] = (w.array() * gram.array()).sum() * inv_k;
    }
  });
  return decide(std::move(stats), threshold);
}

EmpiricalRates empirical_rates(const ArrayConfig<double>& array, const DetectorDesign& design,
                               const StatSelector& selector, const SimConfig& sim0, const SimConfig& sim1,
                               double threshold) {
  if (sim0.snapshots != design.snapshots || sim1.snapshots != design.snapshots)
    throw std::invalid_argument("empirical_rates: simulation snapshot count differs from the design");
  EmpiricalRates out;
  out.h0 = run_trials(array, design.weights, selector, sim0, threshold);
  out.h1 = run_trials(array, design.weights, selector, sim1, threshold);
  return out;
}

EmpiricalStatMoments empirical_stat_moments(const ReceiveCovariance<double>& cov, const StatSelector& selector,
                                            const Eigen::VectorXd& reference_mean, long count, std::uint64_t seed,
                                            int threads) {
  if (count < 2) throw std::invalid_argument("empirical_stat_moments: need at least two samples");
  if (selector.channels() != cov.channels() || reference_mean.size() != selector.size())
    throw std::invalid_argument("empirical_stat_moments: dimension mismatch");
  const Eigen::MatrixXd factor = cholesky_factor(cov);
  const int n_stats = selector.size();
  constexpr long kChunk = 1 << 15;
  const long chunks = (count + kChunk - 1) / kChunk;

  struct Partial {
    Eigen::VectorXd sum, sum_sq;
    Eigen::MatrixXd cross, cross_sq;
  };
  std::vector<Partial> partials(chunks);
  parallel_for(chunks, threads, [&](long c) {
    const long n = std::min(kChunk, count - c * kChunk);
    NormalStream rng(seed, static_cast<std::uint64_t>(c));
    const Eigen::MatrixXd z = sign_of(draw(factor, n, rng));
    Eigen::MatrixXd centred(n_stats, n);
    for (int p = 0; p < n_stats; ++p) {
      const auto [i, j] = selector.pair(p);
      centred.row(p) = (z.row(i).array() * z.row(j).array()).matrix() - Eigen::RowVectorXd::Constant(n, reference_mean(p));
    }
    const Eigen::MatrixXd squared = centred.array().square().matrix();
    Partial& part = partials[c];
    part.sum = centred.rowwise().sum();
    part.sum_sq = squared.rowwise().sum();
    part.cross = centred * centred.transpose();
    part.cross_sq = squared * squared.transpose();
  });

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_stats), sum_sq = sum;
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n_stats, n_stats), cross_sq = cross;
  for (const Partial& part : partials) {
    sum += part.sum;
    sum_sq += part.sum_sq;
    cross += part.cross;
    cross_sq += part.cross_sq;
  }
  const double n = static_cast<double>(count);
  EmpiricalStatMoments out;
  out.samples = count;
  const Eigen::VectorXd offset = sum / n;
  out.mean = reference_mean + offset;
  out.mean_se = ((sum_sq / n - offset.array().square().matrix()).array() / (n - 1)).sqrt();
  out.cov = cross / n;
  out.cov_se = ((cross_sq / n - out.cov.array().square().matrix()).array() / (n - 1)).max(0.0).sqrt();
  return out;
}

}  // namespace onebit
