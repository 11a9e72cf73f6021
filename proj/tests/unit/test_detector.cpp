#include <catch2/catch_amalgamated.hpp>

#include "onebit/detector.hpp"
#include "onebit/errors.hpp"
#include "onebit/normal.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace onebit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StatMoments moments(int sensors, double zeta_deg, double gamma) {
  return onebit_stat_moments(receive_covariance(ArrayConfig<double>::from_degrees(sensors, zeta_deg), gamma),
                             StatSelector(2 * sensors));
}

DetectorDesign synthetic(double mu0, double mu1, double var0, double var1, long k = 1) {
  DetectorDesign d;
  d.weights = Eigen::VectorXd::Ones(1);
  d.mu0 = mu0;
  d.mu1 = mu1;
  d.var0 = var0;
  d.var1 = var1;
  d.snapshots = k;
  return d;
}

double binormal_chi(const DetectorDesign& d) {
  const double s0 = d.sigma0(), s1 = d.sigma1();
  return 2.0 * (1.0 - q_function((d.mu1 - d.mu0) / std::sqrt(s0 * s0 + s1 * s1))) - 1.0;
}

}  // namespace

TEST_CASE("surrogate weights", "[detector]") {
  SECTION("noise-only reference reduces to R1^-1 mu1") {
    const StatMoments m0 = moments(3, 25.0, 0.0), m1 = moments(3, 25.0, 0.6);
    const Eigen::VectorXd b = surrogate_weights(m0, m1);
    CHECK((m1.cov * b - m1.mean).norm() <= 1e-10 * m1.mean.norm());
  }
  SECTION("identical hypotheses give zero weights") {
    const StatMoments m = moments(3, 25.0, 0.6);
    CHECK(surrogate_weights(m, m).norm() == 0.0);
  }
  SECTION("linear-system residual") {
    const double gamma = gamma_from_snr_db(-15.0);
    const StatMoments m0 = moments(4, 45.0, 0.0), m1 = moments(4, 45.0, gamma);
    const Eigen::VectorXd b1 = solve_regularized(m1.cov, m1.mean);
    CHECK((m1.cov * b1 - m1.mean).norm() <= 1e-8 * m1.mean.norm());
    CHECK((surrogate_weights(m0, m1) - b1).norm() == 0.0);
  }
  SECTION("mismatched lengths are rejected") {
    CHECK_THROWS_AS(surrogate_weights(moments(2, 0.0, 0.5), moments(3, 0.0, 0.5)), std::invalid_argument);
  }
}

TEST_CASE("solve_regularized falls back to a ridge on singular input", "[detector]") {
  Eigen::MatrixXd cov(3, 3);
  cov << 1, 1, 0, 1, 1, 0, 0, 0, 2;
  const Eigen::VectorXd rhs = Eigen::Vector3d(1.0, 1.0, 2.0);
  const Eigen::VectorXd x = solve_regularized(cov, rhs);
  CHECK(x.allFinite());
  CHECK((cov * x - rhs).norm() <= 1e-6);
  CHECK_THROWS_AS(solve_regularized(-Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Ones()), NumericalError);
}

TEST_CASE("test_statistic", "[detector]") {
  const StatSelector sel(4);
  Eigen::VectorXd w(6);
  w << 0.5, -1.0, 2.0, 0.25, 3.0, -0.75;
  SignMatrix ones = SignMatrix::Ones(4, 7);
  CHECK_THAT(test_statistic(w, ones, sel), WithinAbs(w.sum(), 1e-15));

  SignMatrix one(4, 1);
  one << 1, -1, 1, 1;
  // flipping channel 1 negates every pair that touches it
  const double flipped = w(0) * -1 + w(1) + w(2) + w(3) * -1 + w(4) * -1 + w(5);
  CHECK_THAT(test_statistic(w, one, sel), WithinAbs(flipped, 1e-15));

  std::mt19937_64 gen(3);
  std::bernoulli_distribution coin;
  SignMatrix z(4, 50);
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, c) = coin(gen) ? 1 : -1;
  double naive = 0.0;
  for (Eigen::Index k = 0; k < z.cols(); ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) naive += w(sel.position(i, j)) * z(i, k) * z(j, k);
  CHECK_THAT(test_statistic(w, z, sel), WithinAbs(naive / 50.0, 1e-13));

  SignMatrix bad = ones;
  bad(2, 3) = 0;
  CHECK_THROWS_AS(test_statistic(w, bad, sel), std::invalid_argument);
  CHECK_THROWS_AS(test_statistic(w, SignMatrix::Ones(5, 2), sel), std::invalid_argument);
}

TEST_CASE("asymptotic_rates", "[detector]") {
  const DetectorDesign same = synthetic(0.3, 0.3, 2.0, 2.0, 10);
  for (double pfa : {1e-6, 1e-3, 0.1, 0.5, 0.9}) CHECK_THAT(asymptotic_rates(same, pfa).pd, WithinAbs(pfa, 1e-12));

  const DetectorDesign far = synthetic(0.0, 100.0, 1.0, 1.0);
  CHECK(asymptotic_rates(far, 1e-6).pd == 1.0);

  const DetectorDesign d = synthetic(0.1, 0.4, 0.5, 0.8, 4);
  const RateResult r = asymptotic_rates(d, 1e-2);
  CHECK_THAT(q_function((r.threshold - d.mu0) / d.sigma0()), WithinRel(1e-2, 1e-12));
  CHECK_THAT(r.pd, WithinRel(q_function((r.threshold - d.mu1) / d.sigma1()), 1e-12));

  CHECK_THROWS_AS(asymptotic_rates(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_rates(d, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_rates(d, std::nan("")), std::invalid_argument);
}

TEST_CASE("P_D increases with P_FA and with separation", "[detector][property]") {
  const DetectorDesign d = synthetic(0.0, 0.5, 1.0, 1.4, 3);
  double prev = 0.0;
  for (double pfa = 1e-8; pfa < 1.0; pfa *= 1.7) {
    const double pd = asymptotic_rates(d, pfa).pd;
    CHECK(pd >= prev);
    prev = pd;
  }
  double last = 0.0;
  for (double mu1 = 0.0; mu1 < 3.0; mu1 += 0.1) {
    const double pd = asymptotic_rates(synthetic(0.0, mu1, 1.0, 1.0), 1e-3).pd;
    CHECK(pd >= last);
    last = pd;
  }
}

TEST_CASE("chi integration", "[detector]") {
  CHECK_THAT(chi_from_roc([](double u) { return u; }), WithinAbs(0.0, 1e-14));
  CHECK_THAT(chi_from_roc([](double) { return 1.0; }), WithinAbs(1.0, 1e-14));
  CHECK(roc_quality(synthetic(0.2, 0.2, 0.0, 0.0)).chi == 0.0);

  for (const DetectorDesign& d : {synthetic(0.0, 0.3, 1.0, 1.0), synthetic(0.1, 1.2, 0.7, 2.5, 2),
                                  synthetic(-1.0, 2.0, 0.3, 0.05, 5), synthetic(0.0, 0.01, 1.0, 1.2)}) {
    CHECK_THAT(roc_quality(d).chi, WithinAbs(binormal_chi(d), 1e-9));
    RocOptions wide;
    wide.v_max = 10.0;
    wide.panels = 20;
    CHECK_THAT(roc_quality(d, wide).chi, WithinAbs(roc_quality(d).chi, 1e-8));
  }

  const RocCurve roc = roc_quality(synthetic(0.0, 1.0, 1.0, 1.0));
  REQUIRE(roc.points.size() == 512);
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    CHECK(roc.points[k].first >= roc.points[k - 1].first);
    CHECK(roc.points[k].second >= roc.points[k - 1].second);
  }

  RocOptions bad;
  bad.panels = 0;
  CHECK_THROWS_AS(roc_quality(synthetic(0.0, 1.0, 1.0, 1.0), bad), std::invalid_argument);
  CHECK_FALSE(chi_db(0.0).has_value());
  CHECK_THAT(*chi_db(0.1), WithinAbs(-10.0, 1e-12));
}

TEST_CASE("equal hypotheses give the chance line", "[detector]") {
  const StatMoments m = moments(3, 40.0, 0.5);
  const DetectorDesign d = onebit_design(m, m, 100);
  for (double pfa : {1e-4, 1e-3, 0.3}) CHECK_THAT(asymptotic_rates(d, pfa).pd, WithinAbs(pfa, 1e-10));
  CHECK(roc_quality(d).chi == 0.0);
}

TEST_CASE("doubling the weights leaves the ROC unchanged", "[detector][property]") {
  const StatMoments m0 = moments(4, 30.0, 0.0), m1 = moments(4, 30.0, gamma_from_snr_db(-12.0));
  const DetectorDesign d = onebit_design(m0, m1, 100);
  const DetectorDesign d2 = make_design(2.0 * d.weights, m0.mean, m0.cov, m1.mean, m1.cov, 100);
  CHECK(std::abs(roc_quality(d2).chi - roc_quality(d).chi) < 1e-12);
  CHECK_THAT(asymptotic_rates(d2, 1e-3).pd, WithinAbs(asymptotic_rates(d, 1e-3).pd, 1e-12));
}

TEST_CASE("snapshot scaling", "[detector][property]") {
  const StatMoments m0 = moments(3, 15.0, 0.0), m1 = moments(3, 15.0, gamma_from_snr_db(-9.0));
  const DetectorDesign d = onebit_design(m0, m1, 37);
  const DetectorDesign d2 = d.with_snapshots(74);
  const double ulp = std::numeric_limits<double>::epsilon();
  CHECK_THAT(d2.sigma0(), WithinRel(d.sigma0() / std::sqrt(2.0), 2 * ulp));
  CHECK_THAT(d2.sigma1(), WithinRel(d.sigma1() / std::sqrt(2.0), 2 * ulp));
  double prev = -1.0;
  for (long k : {1L, 2L, 5L, 10L, 50L, 100L, 500L, 2046L}) {
    const double chi = roc_quality(d.with_snapshots(k)).chi;
    CHECK(chi >= prev);
    prev = chi;
  }
  CHECK_THROWS_AS(d.with_snapshots(0), std::invalid_argument);
}

TEST_CASE("make_design validation", "[detector]") {
  const Eigen::VectorXd w = Eigen::Vector2d(1.0, -1.0);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd mean = Eigen::Vector2d(0.1, 0.2);
  CHECK_THROWS_AS(make_design(w, mean, id, mean, Eigen::MatrixXd::Identity(3, 3), 1), std::invalid_argument);
  CHECK_THROWS_AS(make_design(w, mean, id, mean, id, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_design(w, mean, Eigen::MatrixXd::Ones(2, 2), mean + mean, id, 1), NumericalError);
}

TEST_CASE("full-resolution detector is at least as good as the 1-bit one", "[detector][benchmark]") {
  for (int s : {2, 4}) {
    for (double snr : {-18.0, -9.0}) {
      const auto cfg = ArrayConfig<double>::from_degrees(s, 30.0);
      const double gamma = gamma_from_snr_db(snr);
      const StatSelector sel(2 * s);
      const double chi1 = roc_quality(onebit_design(onebit_stat_moments(receive_covariance(cfg, 0.0), sel),
                                                    onebit_stat_moments(receive_covariance(cfg, gamma), sel), 100))
                              .chi;
      const double chig = roc_quality(gaussian_design(gaussian_stat_moments(receive_covariance(cfg, 0.0)),
                                                      gaussian_stat_moments(receive_covariance(cfg, gamma)), 100))
                              .chi;
      INFO("S=" << s << " snr=" << snr);
      CHECK(chig >= chi1 - 1e-6);
    }
  }
}
