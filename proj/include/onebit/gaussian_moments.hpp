#pragma once

// Exponential-family form of the unquantized zero-mean Gaussian receive
// model: natural parameter -1/2 vec(R^-1), statistic vec(y y^T), mean
// vec(R), and the Isserlis covariance of vec(y y^T). Full (column-major)
// vectorization with duplicated symmetric entries.

#include "onebit/array_model.hpp"
#include "onebit/errors.hpp"

#include <Eigen/Cholesky>

namespace onebit {

template <typename Scalar = double>
struct GaussianStats {
  Vector<Scalar> natural_param;
  Vector<Scalar> mean_stats;
  Matrix<Scalar> stat_cov;
  int channels = 0;
};

/// vec(y y^T), column-major.
template <typename Derived>
Vector<typename Derived::Scalar> gaussian_statistic(const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = y.size();
  Vector<Scalar> out(m * m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(i + j * m) = y(i) * y(j);
  return out;
}

template <typename Scalar>
Matrix<Scalar> spd_inverse(const Matrix<Scalar>& r) {
  Eigen::LLT<Matrix<Scalar>> llt(r);
  if (llt.info() != Eigen::Success)
    throw NumericalError("spd_inverse: matrix is not positive definite");
  Matrix<Scalar> inv = llt.solve(Matrix<Scalar>::Identity(r.rows(), r.cols()));
  return ((inv + inv.transpose()) / 2).eval();
}

template <typename Scalar>
GaussianStats<Scalar> gaussian_stat_moments(const ReceiveCovariance<Scalar>& cov) {
  const Matrix<Scalar>& r = cov.matrix();
  const int m = cov.channels();
  const Matrix<Scalar> r_inv = spd_inverse(r);

  GaussianStats<Scalar> out;
  out.channels = m;
  out.natural_param = (Scalar(-0.5) * r_inv).reshaped();
  out.mean_stats = r.reshaped();
  out.stat_cov.resize(m * m, m * m);
  // cov(y_i y_j, y_k y_l) = R_ik R_jl + R_il R_jk
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          out.stat_cov(i + j * m, k + l * m) = r(i, k) * r(j, l) + r(i, l) * r(j, k);
  return out;
}

/// beta(theta_1) - beta(theta_0): the exact log-likelihood-ratio weights.
template <typename Scalar>
Vector<Scalar> gaussian_weight_vector(const GaussianStats<Scalar>& h0, const GaussianStats<Scalar>& h1) {
  if (h0.channels != h1.channels || h0.natural_param.size() != h1.natural_param.size())
    throw std::invalid_argument("gaussian_weight_vector: hypotheses built for different array sizes");
  return h1.natural_param - h0.natural_param;
}

/// Zero-mean Gaussian log-density.
template <typename Scalar, typename Derived>
Scalar gaussian_log_pdf(const Matrix<Scalar>& r, const Eigen::MatrixBase<Derived>& y) {
  Eigen::LLT<Matrix<Scalar>> llt(r);
  if (llt.info() != Eigen::Success)
    throw NumericalError("gaussian_log_pdf: covariance is not positive definite");
  const Vector<Scalar> w = llt.matrixL().solve(y.template cast<Scalar>());
  const Matrix<Scalar> l = llt.matrixL();
  const Scalar log_det = 2 * l.diagonal().array().log().sum();
  const Scalar m = static_cast<Scalar>(r.rows());
  return Scalar(-0.5) * (w.squaredNorm() + log_det + m * std::log(2 * std::numbers::pi_v<Scalar>));
}

}  // namespace onebit
