#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orey/conditions.hpp"
#include "orey/kernels.hpp"

namespace orey {

enum class McStatistic { BivariateV, GammaHat };

std::string to_string(McStatistic s);
McStatistic parse_statistic(std::string_view text);

/// Normality verdicts need at least this many replications.
inline constexpr int kMinNormalityReps = 100;
inline constexpr double kCovRelTolerance = 0.15;
inline constexpr double kKsPass = 0.01;
inline constexpr double kKsFail = 0.001;

struct McConfig {
  CovarianceModel model;
  int n = 1024;
  int reps = 500;
  std::uint64_t seed = 0;
  McStatistic statistic = McStatistic::BivariateV;
  int threads = 1;
  std::optional<double> ci_level = 0.95;  // GammaHat only; nullopt skips intervals
};

struct KsResult {
  double distance = 0.0;
  double p_value = 1.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct McReport {
  std::string model;
  McStatistic statistic = McStatistic::BivariateV;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;

  // One row per replication. BivariateV: sqrt(n)(V_n/n - E V_n/n, V_2n/(2n) - E V_2n/(2n))
  // with Orey-normalized V. GammaHat: 2 ln 2 sqrt(n) (gamma_hat - gamma).
  std::vector<std::vector<double>> samples;

  std::vector<double> mean;
  std::vector<double> mean_se;
  std::vector<std::vector<double>> cov;
  std::vector<std::vector<double>> target;
  std::vector<std::vector<double>> relative_error;
  std::vector<KsResult> ks;  // per marginal, standardized by its own mean and SD

  // GammaHat only.
  std::vector<double> gamma_hats;
  double gamma_hat_mean = 0.0;
  double gamma_hat_se = 0.0;
  std::optional<double> ci_coverage;
  int ci_suppressed = 0;

  double cov_tolerance = kCovRelTolerance;
  Verdict cov_verdict = Verdict::Inconclusive;
  Verdict mean_verdict = Verdict::Inconclusive;  // |mean| within 4 SE
  Verdict normality_verdict = Verdict::Inconclusive;

  Verdict overall() const;
};

McReport run_bivariate(const McConfig& config);
McReport run_gamma_hat(const McConfig& config);
McReport run(const McConfig& config);

/// Kolmogorov-Smirnov distance of the sample to the standard normal.
double ks_distance(std::vector<double> sample);
/// Asymptotic p-value P(D_n > d) with the Stephens small-sample correction.
double ks_pvalue(double distance, std::size_t n);
/// Standardizes by the sample mean and SD, then tests against N(0,1).
KsResult ks_normality(const std::vector<double>& sample);

}  // namespace orey
