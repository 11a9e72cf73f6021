#include "onebit/onebit_moments.hpp"

#include "onebit/errors.hpp"
#include "onebit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace onebit {

StatSelector::StatSelector(int channels) : channels_(channels) {
  if (channels < 2) throw std::invalid_argument("StatSelector: need at least two channels");
  lookup_.assign(static_cast<std::size_t>(channels) * channels, -1);
  pairs_.reserve(static_cast<std::size_t>(channels) * (channels - 1) / 2);
  for (int i = 0; i < channels; ++i) {
    for (int j = i + 1; j < channels; ++j) {
      const int p = static_cast<int>(pairs_.size());
      pairs_.emplace_back(i, j);
      lookup_[i * channels + j] = p;
      lookup_[j * channels + i] = p;
    }
  }
}

Eigen::VectorXd StatSelector::statistic(const Eigen::VectorXd& z) const {
  if (z.size() != channels_) throw std::invalid_argument("StatSelector::statistic: dimension mismatch");
  Eigen::VectorXd out(size());
  for (int p = 0; p < size(); ++p) out(p) = z(pairs_[p].first) * z(pairs_[p].second);
  return out;
}

Eigen::VectorXd StatSelector::select(const Eigen::MatrixXd& symmetric) const {
  if (symmetric.rows() != channels_ || symmetric.cols() != channels_)
    throw std::invalid_argument("StatSelector::select: dimension mismatch");
  Eigen::VectorXd out(size());
  for (int p = 0; p < size(); ++p) out(p) = symmetric(pairs_[p].first, pairs_[p].second);
  return out;
}

Eigen::MatrixXd arcsine_covariance(const ReceiveCovariance<double>& cov) {
  const Eigen::MatrixXd corr = correlation_normalize(cov);
  Eigen::MatrixXd out = corr.unaryExpr([](double r) {
    return (2.0 / std::numbers::pi) * std::asin(std::clamp(r, -1.0, 1.0));
  });
  out.diagonal().setOnes();
  return out;
}

namespace {

double arcsine(double r) { return (2.0 / std::numbers::pi) * std::asin(std::clamp(r, -1.0, 1.0)); }

Eigen::Matrix4d submatrix4(const Eigen::MatrixXd& corr, int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  Eigen::Matrix4d out;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) out(r, s) = (r == s) ? 1.0 : corr(idx[r], idx[s]);
  return out;
}

// E[z_a z_b z_c z_d] for four distinct channels: expand the all-positive
// indicator prod (1 + z)/2; odd moments vanish.
double distinct_fourth_moment(const Eigen::MatrixXd& corr, const Eigen::MatrixXd& rz, int a, int b,
                              int c, int d, OrthantEvaluator& evaluator) {
  const double p4 = evaluator.quadrivariate(submatrix4(corr, a, b, c, d));
  const double pair_sum = rz(a, b) + rz(a, c) + rz(a, d) + rz(b, c) + rz(b, d) + rz(c, d);
  return 16.0 * p4 - 1.0 - pair_sum;
}

}  // namespace

double sign_fourth_moment(const Eigen::MatrixXd& corr, int i, int j, int k, int l,
                          OrthantEvaluator* evaluator) {
  const int m = static_cast<int>(corr.rows());
  if (!(i < j && k < l) || i < 0 || k < 0 || j >= m || l >= m)
    throw std::invalid_argument("sign_fourth_moment: need i < j, k < l within range");
  if (i == k && j == l) return 1.0;
  // one shared index leaves E[z_u z_v]
  if (i == k) return arcsine(corr(j, l));
  if (i == l) return arcsine(corr(j, k));
  if (j == k) return arcsine(corr(i, l));
  if (j == l) return arcsine(corr(i, k));

  OrthantEvaluator local;
  OrthantEvaluator& eval = evaluator ? *evaluator : local;
  const double p4 = eval.quadrivariate(submatrix4(corr, i, j, k, l));
  const double pair_sum = arcsine(corr(i, j)) + arcsine(corr(i, k)) + arcsine(corr(i, l)) +
                          arcsine(corr(j, k)) + arcsine(corr(j, l)) + arcsine(corr(k, l));
  return 16.0 * p4 - 1.0 - pair_sum;
}

StatMoments onebit_stat_moments(const ReceiveCovariance<double>& cov, const StatSelector& selector,
                                const MomentOptions& options) {
  const int m = cov.channels();
  if (selector.channels() != m)
    throw std::invalid_argument("onebit_stat_moments: selector built for " + std::to_string(selector.channels()) +
                                " channels, covariance has " + std::to_string(m));
  OrthantEvaluator local;
  OrthantEvaluator& evaluator = options.evaluator ? *options.evaluator : local;

  const Eigen::MatrixXd corr = correlation_normalize(cov);
  const Eigen::MatrixXd rz = arcsine_covariance(cov);
  const int n_stats = selector.size();

  StatMoments out;
  out.source_gamma = cov.gamma();
  out.mean = selector.select(rz);
  out.cov.setZero(n_stats, n_stats);
  const Eigen::VectorXd& mu = out.mean;

  // Cells whose pairs overlap: (z_i z_j)^2 = 1 or one shared index.
  for (int p = 0; p < n_stats; ++p) {
    const auto [i, j] = selector.pair(p);
    out.cov(p, p) = 1.0 - mu(p) * mu(p);
    for (int q = p + 1; q < n_stats; ++q) {
      const auto [k, l] = selector.pair(q);
      int u = -1, v = -1;
      if (i == k) u = j, v = l;
      else if (i == l) u = j, v = k;
      else if (j == k) u = i, v = l;
      else if (j == l) u = i, v = k;
      else continue;
      const double c = rz(u, v) - mu(p) * mu(q);
      out.cov(p, q) = c;
      out.cov(q, p) = c;
    }
  }

  // Four distinct channels a<b<c<d feed the three disjoint pairings.
  parallel_for(n_stats, options.threads, [&](long first) {
    const auto [a, b] = selector.pair(static_cast<int>(first));
    for (int c = b + 1; c < m; ++c) {
      for (int d = c + 1; d < m; ++d) {
        const double e4 = distinct_fourth_moment(corr, rz, a, b, c, d, evaluator);
        const int pairing[3][2] = {{selector.position(a, b), selector.position(c, d)},
                                   {selector.position(a, c), selector.position(b, d)},
                                   {selector.position(a, d), selector.position(b, c)}};
        for (const auto& pq : pairing) {
          const double value = e4 - mu(pq[0]) * mu(pq[1]);
          out.cov(pq[0], pq[1]) = value;
          out.cov(pq[1], pq[0]) = value;
        }
      }
    }
  });

  if (options.conditioning_diagnostic) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.cov, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.ill_conditioned = out.min_eigenvalue < 1e-10 * out.cov.trace();
  } else {
    out.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<int> BinaryPmf::pattern(std::size_t atom) const {
  std::vector<int> signs(channels);
  for (int m = 0; m < channels; ++m) signs[m] = (atom >> m) & 1u ? -1 : 1;
  return signs;
}

BinaryPmf exact_binary_pmf(const ReceiveCovariance<double>& cov, OrthantEvaluator* evaluator) {
  const int m = cov.channels();
  if (m > 4)
    throw std::invalid_argument("exact_binary_pmf: exact orthant probabilities are only available for M <= 4 (got M = " +
                                std::to_string(m) + ")");
  if (m != 2 && m != 4) throw std::invalid_argument("exact_binary_pmf: channel count must be 2 or 4");
  OrthantEvaluator local;
  OrthantEvaluator& eval = evaluator ? *evaluator : local;

  const Eigen::MatrixXd corr = correlation_normalize(cov);
  BinaryPmf pmf;
  pmf.channels = m;
  pmf.probability.resize(std::size_t{1} << m);
  double total = 0.0;
  for (std::size_t atom = 0; atom < pmf.probability.size(); ++atom) {
    const std::vector<int> signs = pmf.pattern(atom);
    pmf.probability[atom] = eval.sign_pattern(corr, signs);
    total += pmf.probability[atom];
  }
  if (std::abs(total - 1.0) > 1e-7)
    throw NumericalError("exact_binary_pmf: atoms sum to " + std::to_string(total));
  return pmf;
}

}  // namespace onebit
