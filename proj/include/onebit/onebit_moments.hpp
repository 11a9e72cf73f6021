#pragma once

// Moments of the 1-bit statistic phi(z) = {z_i z_j : i < j} for
// z = sign(y), y ~ N(0, R_y). Second moments follow the arcsine law; the
// covariance of phi needs E[z_i z_j z_k z_l], which reduces to a
// quadrivariate orthant probability when all four indices differ.

#include "onebit/array_model.hpp"
#include "onebit/orthant.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace onebit {

/// Index map over strict upper-triangle channel pairs, ordered
/// lexicographically: (0,1), (0,2), ..., (0,M-1), (1,2), ...
class StatSelector {
 public:
  explicit StatSelector(int channels);

  int channels() const { return channels_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair(int position) const { return pairs_[position]; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  /// Position of the unordered pair {i, j}, or -1 for i == j.
  int position(int i, int j) const { return lookup_[i * channels_ + j]; }

  /// phi(z) for a single sign vector.
  Eigen::VectorXd statistic(const Eigen::VectorXd& z) const;
  /// Upper-triangle values of a symmetric matrix in selector order.
  Eigen::VectorXd select(const Eigen::MatrixXd& symmetric) const;

 private:
  int channels_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> lookup_;
};

struct StatMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double source_gamma = 0.0;
  /// Smallest eigenvalue of cov (NaN when the diagnostic was skipped).
  double min_eigenvalue = 0.0;
  /// min_eigenvalue < 1e-10 * trace(cov).
  bool ill_conditioned = false;
};

struct MomentOptions {
  int threads = 1;
  /// Shared memo table; a private one is used when null.
  OrthantEvaluator* evaluator = nullptr;
  bool conditioning_diagnostic = true;
};

/// (2/pi) asin of the correlation-normalized receive covariance.
Eigen::MatrixXd arcsine_covariance(const ReceiveCovariance<double>& cov);

/// E[z_i z_j z_k z_l] for pairs i<j, k<l, given the normalized correlation.
double sign_fourth_moment(const Eigen::MatrixXd& corr, int i, int j, int k, int l,
                          OrthantEvaluator* evaluator = nullptr);

StatMoments onebit_stat_moments(const ReceiveCovariance<double>& cov, const StatSelector& selector,
                                const MomentOptions& options = {});

/// Exact distribution of z = sign(y) over {-1,+1}^M, only for M <= 4.
/// Bit m of an atom index set means z_m = -1.
struct BinaryPmf {
  int channels = 0;
  std::vector<double> probability;

  std::vector<int> pattern(std::size_t atom) const;
};

BinaryPmf exact_binary_pmf(const ReceiveCovariance<double>& cov, OrthantEvaluator* evaluator = nullptr);

}  // namespace onebit
