#pragma once

#include "onebit/normal.hpp"

// Multiplier on the standard error for checking `comparisons` independent-ish
// entries jointly at the false-alarm level of a single two-sided 3-sigma test
// (Bonferroni). One comparison gives 3.0.
inline double familywise_sigma(long comparisons) {
  const double single = 2.0 * onebit::q_function(3.0);
  return onebit::q_inverse(single / (2.0 * static_cast<double>(comparisons)));
}
