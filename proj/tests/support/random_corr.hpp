#pragma once

#include <Eigen/Dense>

#include <random>

// Random correlation matrix from a normalized Wishart draw G G^T with `rank`
// columns; rank < dim gives an exactly singular matrix.
inline Eigen::MatrixXd random_correlation(std::mt19937_64& gen, int dim, int rank) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd g(dim, rank);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = n01(gen);
  Eigen::MatrixXd s = g * g.transpose();
  const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
  s = d.asDiagonal() * s * d.asDiagonal();
  s.diagonal().setOnes();
  return (s + s.transpose()) / 2;
}
