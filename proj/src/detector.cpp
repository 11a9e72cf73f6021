#include "onebit/detector.hpp"

#include "onebit/errors.hpp"
#include "onebit/normal.hpp"
#include "onebit/quadrature.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>

namespace onebit {

namespace {

bool degenerate(const DetectorDesign& d) { return d.var0 == 0.0 && d.var1 == 0.0 && d.mu0 == d.mu1; }

double pd_at(const DetectorDesign& d, double pfa_quantile) {
  const double s0 = d.sigma0(), s1 = d.sigma1();
  return q_function(pfa_quantile * s0 / s1 - (d.mu1 - d.mu0) / s1);
}

}  // namespace

double DetectorDesign::sigma0() const { return std::sqrt(var0 / static_cast<double>(snapshots)); }
double DetectorDesign::sigma1() const { return std::sqrt(var1 / static_cast<double>(snapshots)); }

DetectorDesign DetectorDesign::with_snapshots(long k) const {
  if (k < 1) throw std::invalid_argument("DetectorDesign: snapshot count must be >= 1");
  DetectorDesign out = *this;
  out.snapshots = k;
  return out;
}

DetectorDesign make_design(const Eigen::VectorXd& weights, const Eigen::VectorXd& mean0,
                           const Eigen::MatrixXd& cov0, const Eigen::VectorXd& mean1,
                           const Eigen::MatrixXd& cov1, long snapshots) {
  const Eigen::Index n = weights.size();
  if (mean0.size() != n || mean1.size() != n || cov0.rows() != n || cov0.cols() != n || cov1.rows() != n ||
      cov1.cols() != n)
    throw std::invalid_argument("make_design: weight and moment dimensions differ");
  if (snapshots < 1) throw std::invalid_argument("make_design: snapshot count must be >= 1");
  DetectorDesign d;
  d.weights = weights;
  d.mu0 = weights.dot(mean0);
  d.mu1 = weights.dot(mean1);
  d.var0 = weights.dot(cov0 * weights);
  d.var1 = weights.dot(cov1 * weights);
  d.snapshots = snapshots;
  if (!degenerate(d) && !(d.var0 > 0.0 && d.var1 > 0.0))
    throw NumericalError("make_design: test statistic has non-positive variance (var0 = " +
                         std::to_string(d.var0) + ", var1 = " + std::to_string(d.var1) + ")");
  return d;
}

Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& cov, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n || rhs.size() != n) throw std::invalid_argument("solve_regularized: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  double eps = 1e-10 * cov.trace() / static_cast<double>(n);
  for (int attempt = 0; attempt <= 20; ++attempt, eps *= 2.0) {
    Eigen::MatrixXd ridged = cov;
    ridged.diagonal().array() += eps;
    llt.compute(ridged);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
  }
  throw NumericalError("solve_regularized: statistic covariance is irrecoverably ill-conditioned");
}

Eigen::VectorXd surrogate_weights(const StatMoments& m0, const StatMoments& m1) {
  if (m0.mean.size() != m1.mean.size())
    throw std::invalid_argument("surrogate_weights: hypotheses use different statistic lengths");
  return solve_regularized(m1.cov, m1.mean) - solve_regularized(m0.cov, m0.mean);
}

DetectorDesign onebit_design(const StatMoments& m0, const StatMoments& m1, long snapshots) {
  return make_design(surrogate_weights(m0, m1), m0.mean, m0.cov, m1.mean, m1.cov, snapshots);
}

DetectorDesign gaussian_design(const GaussianStats<double>& h0, const GaussianStats<double>& h1, long snapshots) {
  return make_design(gaussian_weight_vector(h0, h1), h0.mean_stats, h0.stat_cov, h1.mean_stats, h1.stat_cov,
                     snapshots);
}

double test_statistic(const Eigen::VectorXd& weights, const SignMatrix& snapshots, const StatSelector& selector) {
  if (snapshots.rows() != selector.channels() || weights.size() != selector.size())
    throw std::invalid_argument("test_statistic: dimension mismatch");
  if (snapshots.cols() < 1) throw std::invalid_argument("test_statistic: need at least one snapshot");
  if (!(snapshots.array() == 1 || snapshots.array() == -1).all())
    throw std::invalid_argument("test_statistic: snapshot entries must be +1 or -1");
  const Eigen::MatrixXd z = snapshots.cast<double>();
  const Eigen::MatrixXd gram = z * z.transpose();
  double t = 0.0;
  for (int p = 0; p < selector.size(); ++p) {
    const auto [i, j] = selector.pair(p);
    t += weights(p) * gram(i, j);
  }
  return t / static_cast<double>(snapshots.cols());
}

RateResult asymptotic_rates(const DetectorDesign& design, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("asymptotic_rates: P_FA must lie in (0, 1)");
  if (degenerate(design)) return {pfa, design.mu0};
  const double v = q_inverse(pfa);
  return {pd_at(design, v), v * design.sigma0() + design.mu0};
}

namespace {

// chi = 2 * integral of P_D(u) du over (0,1) - 1; with u = Q(v) this becomes
// an integral of P_D(Q(v)) phi(v) over v, truncated to [-v_max, v_max].
template <typename Fn>
double chi_over_quantile(Fn&& pd_of_quantile, const RocOptions& options) {
  const GaussRule rule = gauss_legendre(options.nodes_per_panel);
  const double width = 2.0 * options.v_max / options.panels;
  double area = 0.0;
  for (int panel = 0; panel < options.panels; ++panel) {
    const double mid = -options.v_max + (panel + 0.5) * width;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = mid + 0.5 * width * rule.nodes[i];
      sum += rule.weights[i] * pd_of_quantile(v) * normal_pdf(v);
    }
    area += 0.5 * width * sum;
  }
  return 2.0 * area - 1.0;
}

void check_options(const RocOptions& options) {
  if (options.panels < 1 || options.nodes_per_panel < 1 || options.curve_points < 2 || !(options.v_max > 0))
    throw std::invalid_argument("roc_quality: invalid integration options");
}

}  // namespace

double chi_from_roc(const std::function<double(double)>& pd_of_pfa, const RocOptions& options) {
  check_options(options);
  return chi_over_quantile([&](double v) { return pd_of_pfa(q_function(v)); }, options);
}

RocCurve roc_quality(const DetectorDesign& design, const RocOptions& options) {
  check_options(options);
  RocCurve roc;
  roc.chi = degenerate(design) ? 0.0 : chi_over_quantile([&](double v) { return pd_at(design, v); }, options);
  roc.points.reserve(options.curve_points);
  for (int k = 0; k < options.curve_points; ++k) {
    const double v = options.v_max - 2.0 * options.v_max * k / (options.curve_points - 1);
    const double pfa = q_function(v);
    roc.points.emplace_back(pfa, degenerate(design) ? pfa : pd_at(design, v));
  }
  return roc;
}

std::optional<double> chi_db(double chi) {
  if (!(chi > 0.0)) return std::nullopt;
  return 10.0 * std::log10(chi);
}

}  // namespace onebit
