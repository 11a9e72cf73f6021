#include "onebit/orthant.hpp"

#include "onebit/errors.hpp"
#include "onebit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace onebit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_correlation(double rho) {
  if (std::isnan(rho) || std::abs(rho) > 1.0 + OrthantPolicy::clamp_tolerance)
    throw std::invalid_argument("orthant: correlation outside [-1, 1]: " + std::to_string(rho));
  return std::clamp(rho, -1.0, 1.0);
}

// Off-diagonal index order used by keys: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
constexpr int kPairA[6] = {0, 0, 0, 1, 1, 2};
constexpr int kPairB[6] = {1, 2, 3, 2, 3, 3};

}  // namespace

double orthant_bivariate(double rho) {
  return 0.25 + std::asin(clamp_correlation(rho)) / kTwoPi;
}

namespace detail {

Eigen::Matrix4d checked_correlation4(const Eigen::Matrix4d& corr, bool* near_singular) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(corr(i, i) - 1.0) > OrthantPolicy::clamp_tolerance)
      throw std::invalid_argument("orthant: correlation matrix must have unit diagonal");
    for (int j = i + 1; j < 4; ++j) {
      if (std::abs(corr(i, j) - corr(j, i)) > OrthantPolicy::clamp_tolerance)
        throw std::invalid_argument("orthant: correlation matrix must be symmetric");
      out(i, j) = out(j, i) = clamp_correlation(corr(i, j));
    }
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(out, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  if (min_eig < -OrthantPolicy::psd_tolerance)
    throw std::invalid_argument("orthant: correlation matrix is not positive semi-definite (min eigenvalue " +
                                std::to_string(min_eig) + ")");
  if (near_singular) *near_singular = min_eig < OrthantPolicy::singular_threshold;
  return out;
}

double quadrivariate_quadrature(const Eigen::Matrix4d& corr) {
  double rho[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho[i][j] = corr(i, j);

  bool all_zero = true;
  for (int p = 0; p < 6; ++p) all_zero = all_zero && rho[kPairA[p]][kPairB[p]] == 0.0;
  if (all_zero) return 1.0 / 16.0;

  // R(t) = (1 - t) I + t R = V diag((1 - t) + t lambda) V^T. With t = 1 - s^2
  // the shift 1 - t = s^2 is exact, so the precision matrix stays accurate
  // as R(t) approaches a singular R.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(corr);
  const Eigen::Matrix4d v = eig.eigenvectors();
  const Eigen::Vector4d lambda = eig.eigenvalues().cwiseMax(0.0);

  auto integrand = [&](double s) {
    const double shift = s * s;
    const double t = 1.0 - shift;
    const Eigen::Vector4d inv_diag = (shift + t * lambda.array()).inverse().matrix();
    const Eigen::Matrix4d precision = v * inv_diag.asDiagonal() * v.transpose();
    double total = 0.0;
    for (int p = 0; p < 6; ++p) {
      const int i = kPairA[p], j = kPairB[p];
      const double rho_ij = rho[i][j];
      if (rho_ij == 0.0) continue;
      const int k = kPairA[5 - p], l = kPairB[5 - p];  // complementary pair
      // (k, l) given x_i = x_j = 0: partial correlation from the precision matrix
      const double partial =
          std::clamp(-precision(k, l) / std::sqrt(precision(k, k) * precision(l, l)), -1.0, 1.0);
      // 1 - t^2 rho^2 with 1 - t|rho| = (1 - |rho|) + |rho| s^2
      const double abs_rho = std::abs(rho_ij);
      const double den = ((1.0 - abs_rho) + abs_rho * shift) * (1.0 + t * abs_rho);
      total += rho_ij / (kTwoPi * std::sqrt(den)) * (0.25 + std::asin(partial) / kTwoPi);
    }
    // dt = -2 s ds
    return 2.0 * s * total;
  };
  const QuadratureResult result =
      integrate_adaptive(integrand, 0.0, 1.0, OrthantPolicy::abs_tolerance, OrthantPolicy::max_evaluations);
  return std::clamp(1.0 / 16.0 + result.value, 0.0, 0.5);
}

}  // namespace detail

double orthant_quadrivariate(const Eigen::Matrix4d& corr) {
  return detail::quadrivariate_quadrature(detail::checked_correlation4(corr, nullptr));
}

namespace {

Eigen::MatrixXd flipped(const Eigen::MatrixXd& corr, std::span<const int> signs) {
  const Eigen::Index n = corr.rows();
  if (corr.cols() != n || static_cast<Eigen::Index>(signs.size()) != n)
    throw std::invalid_argument("sign_pattern_probability: dimension mismatch");
  if (n != 2 && n != 4) throw std::invalid_argument("sign_pattern_probability: dimension must be 2 or 4");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("sign_pattern_probability: signs must be +1 or -1");
  Eigen::MatrixXd out = corr;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) *= signs[i] * signs[j];
  return out;
}

}  // namespace

double sign_pattern_probability(const Eigen::MatrixXd& corr, std::span<const int> signs) {
  const Eigen::MatrixXd c = flipped(corr, signs);
  if (c.rows() == 2) return orthant_bivariate(c(0, 1));
  return orthant_quadrivariate(Eigen::Matrix4d(c));
}

OrthantKey orthant_key(const Eigen::Matrix4d& corr) {
  std::array<int, 4> perm = {0, 1, 2, 3};
  OrthantKey best{};
  bool first = true;
  do {
    OrthantKey key;
    for (int p = 0; p < 6; ++p) {
      const double v = corr(perm[kPairA[p]], perm[kPairB[p]]);
      key[p] = std::llround(v / OrthantPolicy::key_grid);
    }
    if (first || key < best) best = key;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Eigen::Matrix4d orthant_key_matrix(const OrthantKey& key) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Identity();
  for (int p = 0; p < 6; ++p) {
    const double v = static_cast<double>(key[p]) * OrthantPolicy::key_grid;
    out(kPairA[p], kPairB[p]) = out(kPairB[p], kPairA[p]) = v;
  }
  return out;
}

std::size_t OrthantKeyHash::operator()(const OrthantKey& key) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (std::int64_t v : key) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

double OrthantEvaluator::quadrivariate(const Eigen::Matrix4d& corr) {
  bool near_singular = false;
  const Eigen::Matrix4d clean = detail::checked_correlation4(corr, &near_singular);
  const OrthantKey key = orthant_key(clean);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  if (near_singular) ++singular_warnings_;
  Eigen::Matrix4d keyed = orthant_key_matrix(key);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) keyed(i, j) = std::clamp(keyed(i, j), -1.0, 1.0);
  const double value = detail::quadrivariate_quadrature(keyed);
  std::unique_lock lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

double OrthantEvaluator::sign_pattern(const Eigen::MatrixXd& corr, std::span<const int> signs) {
  const Eigen::MatrixXd c = flipped(corr, signs);
  if (c.rows() == 2) return orthant_bivariate(c(0, 1));
  return quadrivariate(Eigen::Matrix4d(c));
}

std::size_t OrthantEvaluator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace onebit
