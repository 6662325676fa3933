#pragma once

#include <optional>
#include <string>

#include "orey/kernels.hpp"
#include "orey/pathgen.hpp"

namespace orey {

struct ConfidenceInterval {
  double level = 0.95;
  double low = 0.0;
  double high = 0.0;
  /// Plug-in sqrt(sigma_gamma^2(gamma_hat)).
  double sigma = 0.0;
};

struct EstimateResult {
  double gamma_hat = 0.0;
  int n = 0;
  double v_n = 0.0;   // raw sum of squared level-n second differences
  double v_2n = 0.0;  // raw sum at level 2n
  std::optional<ConfidenceInterval> ci;
  /// Set when a requested interval was suppressed.
  std::string warning;
};

/// gamma_hat = 1/2 - ln(V_2n / V_n) / (2 ln 2) from a path with 2n + 1
/// points; the level-n statistic uses every second point. Throws
/// DegenerateInputError if either statistic is zero up to rounding of the
/// path values.
EstimateResult gamma_hat(const GridPath& path);

/// Plug-in interval gamma_hat +- z sigma(gamma_hat) / (2 ln 2 sqrt(n)).
/// Returns nullopt (with result.warning set by estimate()) when gamma_hat is
/// outside (0.01, 0.99).
std::optional<ConfidenceInterval> confidence_interval(const EstimateResult& result, double level);

/// gamma_hat plus the optional confidence interval.
EstimateResult estimate(const GridPath& path, std::optional<double> ci_level = std::nullopt);

/// (n/T)^{2 gamma - 1} sum_k (Delta^2_{n,k} X)^2 over the full path
/// resolution; tends to kappa^2 (4 - 2^{2 gamma}) T.
double scaled_qv(const GridPath& path, const OreyMetadata& metadata);

/// Limit of scaled_qv.
double scaled_qv_limit(const OreyMetadata& metadata, double horizon);

}  // namespace orey
