#include <catch2/catch_amalgamated.hpp>

#include "onebit/errors.hpp"
#include "onebit/normal.hpp"
#include "onebit/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace onebit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values computed with mpmath at 40 digits.
TEST_CASE("q_function matches high-precision values", "[normal]") {
  CHECK(q_function(0.0) == 0.5);
  CHECK_THAT(q_function(1.0), WithinRel(0.15865525393145705141, 1e-14));
  CHECK_THAT(q_function(3.0), WithinRel(0.0013498980316300945267, 1e-14));
  CHECK_THAT(q_function(5.0), WithinRel(2.8665157187919391167e-7, 1e-13));
  CHECK_THAT(q_function(8.0), WithinRel(6.2209605742717841235e-16, 1e-13));
  CHECK_THAT(q_function(20.0), WithinRel(2.7536241186062336951e-89, 1e-12));
  CHECK_THAT(q_function(-2.0), WithinRel(0.9772498680518207928, 1e-15));
}

TEST_CASE("q_inverse is accurate deep in the tails", "[normal]") {
  CHECK_THAT(q_inverse(1e-3), WithinRel(3.0902323061678135415, 1e-13));
  CHECK_THAT(q_inverse(1e-4), WithinRel(3.7190164854556805644, 1e-13));
  CHECK_THAT(q_inverse(1e-12), WithinRel(7.0344838253011319298, 1e-13));
  CHECK_THAT(q_inverse(1e-300), WithinRel(37.047096299361199237, 1e-13));
  CHECK_THAT(q_inverse(0.9), WithinRel(-1.281551565544600467, 1e-13));
  CHECK(std::abs(q_inverse(0.5)) < 1e-15);
}

TEST_CASE("q_inverse inverts q_function with relative error below 1e-12", "[normal]") {
  for (double e = -300.0; e <= -0.31; e += 0.37) {
    const double p = std::pow(10.0, e);
    CHECK_THAT(q_function(q_inverse(p)), WithinRel(p, 1e-12));
    if (p > 1e-15) CHECK_THAT(q_function(q_inverse(1.0 - p)), WithinRel(1.0 - p, 1e-12));
  }
}

TEST_CASE("q_inverse rejects probabilities outside (0,1)", "[normal]") {
  CHECK_THROWS_AS(q_inverse(0.0), std::invalid_argument);
  CHECK_THROWS_AS(q_inverse(1.0), std::invalid_argument);
  CHECK_THROWS_AS(q_inverse(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(q_inverse(std::nan("")), std::invalid_argument);
}

TEST_CASE("gauss_legendre integrates polynomials exactly", "[quadrature]") {
  for (int n : {1, 2, 5, 10, 32, 200}) {
    const GaussRule rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK_THAT(weight_sum, WithinAbs(2.0, 1e-13));
    // x^(2n-2) is integrated exactly: 2 / (2n - 1)
    const int deg = 2 * n - 2;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], deg);
    CHECK_THAT(sum, WithinRel(2.0 / (deg + 1), 1e-12));
    for (int i = 1; i < n; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
}

TEST_CASE("integrate_adaptive handles smooth and endpoint-singular integrands", "[quadrature]") {
  auto r1 = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12, 100000);
  CHECK_THAT(r1.value, WithinAbs(std::numbers::e - 1.0, 1e-12));
  auto r2 = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-8, 1000000);
  CHECK_THAT(r2.value, WithinAbs(2.0, 1e-7));
}

TEST_CASE("integrate_adaptive enforces its evaluation budget", "[quadrature]") {
  auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  CHECK_THROWS_AS(integrate_adaptive(nasty, 0.0, 1.0, 1e-14, 2000), NumericalError);
}
