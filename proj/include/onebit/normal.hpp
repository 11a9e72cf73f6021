#pragma once

namespace onebit {

/// Standard normal density.
double normal_pdf(double x);

/// Upper tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Inverse of Q on (0, 1). Rational initial guess refined by Halley steps
/// on erfc; relative error near machine precision across the tails.
double q_inverse(double p);

}  // namespace onebit
