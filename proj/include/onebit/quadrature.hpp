#pragma once

#include <functional>
#include <vector>

namespace onebit {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Globally adaptive bisection on 10-point Gauss-Legendre panels. A segment's
/// error estimate is the gap between its panel value and the sum over its two
/// halves; the worst segment is split until the estimates sum to abs_tol.
/// Throws NumericalError once max_evaluations would be exceeded. The split
/// sequence is a pure function of the integrand, so results are reproducible.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, long max_evaluations);

}  // namespace onebit
