#pragma once

#include "onebit/onebit_moments.hpp"

#include <Eigen/Dense>

// Moments of phi(z) computed by direct summation over the atoms of an
// exact pmf.
struct PmfMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

inline PmfMoments moments_from_pmf(const onebit::BinaryPmf& pmf, const onebit::StatSelector& selector) {
  const int n = selector.size();
  PmfMoments out{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t atom = 0; atom < pmf.probability.size(); ++atom) {
    const std::vector<int> signs = pmf.pattern(atom);
    Eigen::VectorXd phi(n);
    for (int p = 0; p < n; ++p) phi(p) = signs[selector.pair(p).first] * signs[selector.pair(p).second];
    out.mean += pmf.probability[atom] * phi;
    second += pmf.probability[atom] * phi * phi.transpose();
  }
  out.cov = second - out.mean * out.mean.transpose();
  return out;
}
