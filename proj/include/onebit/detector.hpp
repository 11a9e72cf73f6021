#pragma once

// Linear-in-statistic Neyman-Pearson detector T = b^T mean_k phi(z_k) and
// its large-sample (Gaussian) error rates.

#include "onebit/gaussian_moments.hpp"
#include "onebit/onebit_moments.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace onebit {

struct DetectorDesign {
  Eigen::VectorXd weights;
  double mu0 = 0.0;
  double mu1 = 0.0;
  /// Per-snapshot variances b^T R_phi(theta_i) b; sigma_i = sqrt(var_i / K).
  double var0 = 0.0;
  double var1 = 0.0;
  long snapshots = 1;

  double sigma0() const;
  double sigma1() const;
  /// Same weights and moments evaluated for a different snapshot count.
  DetectorDesign with_snapshots(long k) const;
};

/// Build a design from weights and the statistic moments under both hypotheses.
DetectorDesign make_design(const Eigen::VectorXd& weights, const Eigen::VectorXd& mean0,
                           const Eigen::MatrixXd& cov0, const Eigen::VectorXd& mean1,
                           const Eigen::MatrixXd& cov1, long snapshots);

/// Symmetric solve with the ridge fallback: eps = 1e-10 trace / n, doubled at
/// most 20 times before giving up with NumericalError.
Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& cov, const Eigen::VectorXd& rhs);

/// R_1^-1 mu_1 - R_0^-1 mu_0.
Eigen::VectorXd surrogate_weights(const StatMoments& m0, const StatMoments& m1);

DetectorDesign onebit_design(const StatMoments& m0, const StatMoments& m1, long snapshots);
DetectorDesign gaussian_design(const GaussianStats<double>& h0, const GaussianStats<double>& h1, long snapshots);

using SignMatrix = Eigen::Matrix<signed char, Eigen::Dynamic, Eigen::Dynamic>;

/// b^T applied to the snapshot average of phi; Z holds one sign vector per column.
double test_statistic(const Eigen::VectorXd& weights, const SignMatrix& snapshots, const StatSelector& selector);

struct RateResult {
  double pd = 0.0;
  double threshold = 0.0;
};

/// Asymptotic P_D at the given P_FA and the corresponding threshold.
RateResult asymptotic_rates(const DetectorDesign& design, double pfa);

struct RocOptions {
  double v_max = 8.0;
  int panels = 16;
  int nodes_per_panel = 32;
  int curve_points = 512;
};

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (P_FA, P_D), P_FA ascending
  double chi = 0.0;
};

RocCurve roc_quality(const DetectorDesign& design, const RocOptions& options = {});

/// chi integrated from an arbitrary ROC function P_D(P_FA) by the same rule.
double chi_from_roc(const std::function<double(double)>& pd_of_pfa, const RocOptions& options = {});

/// 10 log10(chi), defined only for chi > 0.
std::optional<double> chi_db(double chi);

}  // namespace onebit
