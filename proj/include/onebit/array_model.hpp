#pragma once

// Uniform linear array with half-wavelength spacing observing a narrow-band
// source. Channels are stacked [I-block; Q-block], so channel c < S is the
// in-phase output of sensor c and channel S + c its quadrature output.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace onebit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
class ArrayConfig {
 public:
  ArrayConfig(int sensors, Scalar angle_rad) : sensors_(sensors), angle_(angle_rad) {
    if (sensors < 1) throw std::invalid_argument("ArrayConfig: sensor count must be >= 1");
    const Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
    if (!(angle_rad >= -half_pi && angle_rad <= half_pi))
      throw std::invalid_argument("ArrayConfig: arrival angle must lie in [-pi/2, pi/2]");
  }

  static ArrayConfig from_degrees(int sensors, Scalar angle_deg) {
    return ArrayConfig(sensors, angle_deg * std::numbers::pi_v<Scalar> / 180);
  }

  int sensors() const { return sensors_; }
  int channels() const { return 2 * sensors_; }
  Scalar angle() const { return angle_; }

 private:
  int sensors_;
  Scalar angle_;
};

/// M x 2 steering matrix [A_I; A_Q].
template <typename Scalar = double>
class SteeringMatrix {
 public:
  explicit SteeringMatrix(Eigen::Matrix<Scalar, Eigen::Dynamic, 2> entries)
      : entries_(std::move(entries)) {}

  const Eigen::Matrix<Scalar, Eigen::Dynamic, 2>& entries() const { return entries_; }
  int channels() const { return static_cast<int>(entries_.rows()); }
  int sensors() const { return channels() / 2; }

 private:
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> entries_;
};

/// R_y(gamma) = gamma^2 A A^T + I for a source of amplitude gamma.
template <typename Scalar = double>
class ReceiveCovariance {
 public:
  ReceiveCovariance(Matrix<Scalar> matrix, Scalar gamma)
      : matrix_(std::move(matrix)), gamma_(gamma) {}

  const Matrix<Scalar>& matrix() const { return matrix_; }
  Scalar gamma() const { return gamma_; }
  int channels() const { return static_cast<int>(matrix_.rows()); }

 private:
  Matrix<Scalar> matrix_;
  Scalar gamma_;
};

template <typename Scalar>
SteeringMatrix<Scalar> build_steering(const ArrayConfig<Scalar>& config) {
  const int s_count = config.sensors();
  const Scalar phase_step = std::numbers::pi_v<Scalar> * std::sin(config.angle());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> a(2 * s_count, 2);
  for (int s = 0; s < s_count; ++s) {
    const Scalar psi = static_cast<Scalar>(s) * phase_step;
    const Scalar c = std::cos(psi);
    const Scalar sn = std::sin(psi);
    a(s, 0) = c;
    a(s, 1) = sn;
    a(s_count + s, 0) = -sn;
    a(s_count + s, 1) = c;
  }
  return SteeringMatrix<Scalar>(std::move(a));
}

/// The diagonal is written as 1 + gamma^2 directly: steering rows have unit
/// norm, and pinning it keeps the diagonal exactly constant in floating point.
template <typename Scalar>
ReceiveCovariance<Scalar> receive_covariance(const SteeringMatrix<Scalar>& steering, Scalar gamma) {
  if (!(gamma >= 0)) throw std::invalid_argument("receive_covariance: gamma must be >= 0");
  const auto& a = steering.entries();
  Matrix<Scalar> r = (gamma * gamma) * (a * a.transpose());
  r.diagonal().setConstant(1 + gamma * gamma);
  // enforce exact symmetry
  r = ((r + r.transpose()) / 2).eval();
  return ReceiveCovariance<Scalar>(std::move(r), gamma);
}

template <typename Scalar>
ReceiveCovariance<Scalar> receive_covariance(const ArrayConfig<Scalar>& config, Scalar gamma) {
  return receive_covariance(build_steering(config), gamma);
}

/// diag(R)^{-1/2} R diag(R)^{-1/2}. Accepts any symmetric matrix with a
/// positive diagonal.
template <typename Derived>
Matrix<typename Derived::Scalar> correlation_normalize(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) throw std::invalid_argument("correlation_normalize: matrix must be square");
  Vector<Scalar> d = cov.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(d(i) > 0))
      throw std::invalid_argument("correlation_normalize: non-positive diagonal entry at " +
                                  std::to_string(i));
  }
  Matrix<Scalar> out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = (i == j) ? Scalar(1) : cov(i, j) / std::sqrt(d(i) * d(j));
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> correlation_normalize(const ReceiveCovariance<Scalar>& cov) {
  return correlation_normalize(cov.matrix());
}

/// gamma = sqrt(SNR) with SNR given in dB.
template <typename Scalar = double>
Scalar gamma_from_snr_db(Scalar snr_db) {
  return std::pow(Scalar(10), snr_db / 20);
}

}  // namespace onebit
