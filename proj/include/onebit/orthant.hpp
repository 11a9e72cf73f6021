#pragma once

// Orthant probabilities of standardized zero-mean Gaussian vectors.
//
// The quadrivariate case integrates Plackett's identity along the path
// R(t) = I + t (R - I): d/dt P(R(t)) = sum_{i<j} rho_ij * phi2(0,0; t rho_ij)
// * P(x_k > 0, x_l > 0 | x_i = x_j = 0), where the conditional term is the
// closed-form bivariate orthant of the partial correlation of (k, l).

#include <Eigen/Dense>

#include <array>
#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <span>
#include <unordered_map>

namespace onebit {

/// Numerical policy shared by every orthant evaluation.
struct OrthantPolicy {
  static constexpr double clamp_tolerance = 1e-9;    // |rho| in (1, 1 + tol] is clamped
  static constexpr double psd_tolerance = 1e-10;     // min eigenvalue below -tol is rejected
  static constexpr double singular_threshold = 1e-8; // min eigenvalue below this counts a warning
  static constexpr double abs_tolerance = 1e-10;     // quadrature target (contract: 1e-8)
  static constexpr long max_evaluations = 1'000'000;
  static constexpr double key_grid = 1e-12;
};

/// 1/4 + asin(rho) / (2 pi).
double orthant_bivariate(double rho);

/// P(x > 0) for x ~ N(0, corr), corr a 4x4 correlation matrix. No caching.
double orthant_quadrivariate(const Eigen::Matrix4d& corr);

/// P(s_i x_i > 0 for all i) for dim 2 or 4 (flip rho_ij -> s_i s_j rho_ij).
double sign_pattern_probability(const Eigen::MatrixXd& corr, std::span<const int> signs);

/// Canonical cache key: six off-diagonal entries on a 1e-12 grid, minimised
/// over the 24 relabelings of the four variables.
using OrthantKey = std::array<std::int64_t, 6>;
OrthantKey orthant_key(const Eigen::Matrix4d& corr);
Eigen::Matrix4d orthant_key_matrix(const OrthantKey& key);

struct OrthantKeyHash {
  std::size_t operator()(const OrthantKey& key) const noexcept;
};

/// Memoizing quadrivariate evaluator, safe for concurrent use. Values are a
/// pure function of the canonical key, so results do not depend on the order
/// in which threads populate the cache.
class OrthantEvaluator {
 public:
  double quadrivariate(const Eigen::Matrix4d& corr);
  double sign_pattern(const Eigen::MatrixXd& corr, std::span<const int> signs);

  long cache_hits() const { return hits_.load(); }
  long cache_misses() const { return misses_.load(); }
  long singular_warnings() const { return singular_warnings_.load(); }
  std::size_t cache_size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<OrthantKey, double, OrthantKeyHash> cache_;
  std::atomic<long> hits_{0};
  std::atomic<long> misses_{0};
  std::atomic<long> singular_warnings_{0};
};

namespace detail {
/// Validates, clamps and reports near-singularity; returns the cleaned matrix.
Eigen::Matrix4d checked_correlation4(const Eigen::Matrix4d& corr, bool* near_singular);
double quadrivariate_quadrature(const Eigen::Matrix4d& corr);
}  // namespace detail

}  // namespace onebit
