#pragma once

#include <cstdint>

namespace orey {

/// Limiting covariance of the normalized quadratic-variation pair
/// sqrt(n) (V_n / n - 1, V_2n / (2n) - 1) for fBm-type processes.
struct AsymptoticCovariance {
  double gamma = 0.0;
  double sigma11 = 0.0;
  double sigma12 = 0.0;
  double sigma22 = 0.0;
  /// Asymptotic variance of 2 ln 2 sqrt(n) (gamma_hat - gamma).
  double sigma_gamma_sq = 0.0;
  std::int64_t truncation_j = 0;
  /// Certified bound on |computed - exact| for sigma11 and sigma12.
  double tail_bound = 0.0;
};

/// Correlation of fBm second differences at one level, up to 4 - 2^{2g}:
/// rho_hat(j) = (-6|j|^{2g} - |j-2|^{2g} - |j+2|^{2g} + 4|j-1|^{2g} + 4|j+1|^{2g}) / 2.
double rho_hat(double gamma, std::int64_t j);

/// Cross-level (n vs 2n) counterpart of rho_hat:
/// (|j+1|^{2g} + 2|j+2|^{2g} - |j+3|^{2g} + |j-1|^{2g} - 4|j|^{2g} - |j-3|^{2g} + 2|j-2|^{2g}) / 2.
double rho_tilde(double gamma, std::int64_t j);

inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr std::int64_t kMaxTruncation = 10'000'000;

/// Sigma_gamma from the squared-correlation series, truncated where the
/// analytic tail bounds |rho_hat(j)| / (4 - 2^{2g}) <= 9 j^{2g-4} (j >= 3)
/// and |rho_tilde(j)| / (4 - 2^{2g}) <= 26 |j|^{2g-4} (|j| >= 4) certify an
/// error below tol. Throws TruncationError if that needs J > 10^7.
AsymptoticCovariance sigma_matrix(double gamma, double tol = kDefaultSeriesTol);

/// 3/2 Sigma11 - 2 Sigma12.
double sigma_gamma_sq(double gamma, double tol = kDefaultSeriesTol);

}  // namespace orey
