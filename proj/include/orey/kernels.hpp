#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace orey {

enum class ModelKind { Fbm, Sfbm, Bifbm, Custom };

/// Orey index gamma and the normalizing constant kappa with
/// sigma_X(t, t+h) ~ kappa * h^gamma as h -> 0.
struct OreyMetadata {
  double gamma = 0.0;
  double kappa = 1.0;
};

using CovarianceFunction = std::function<double(double, double)>;

/// |x|^p with the convention 0^p = 0, evaluated as exp(p ln|x|).
double pow_abs(double x, double p);

/// A zero-mean Gaussian process on [0, T] described by its covariance.
///
/// Built-in families:
///   fbm   : R(s,t) = (s^{2g} + t^{2g} - |t-s|^{2g}) / 2
///   sfbm  : R(s,t) = s^{2H} + t^{2H} - ((s+t)^{2H} + |s-t|^{2H}) / 2
///   bifbm : R(s,t) = 2^{-K} ((s^{2H} + t^{2H})^K - |t-s|^{2HK})
/// Custom models wrap a user callable and must declare their metadata
/// explicitly if any Orey-normalized quantity is requested.
class CovarianceModel {
 public:
  static CovarianceModel fbm(double gamma, double horizon = 1.0);
  static CovarianceModel sfbm(double hurst, double horizon = 1.0);
  static CovarianceModel bifbm(double hurst, double k, double horizon = 1.0);
  static CovarianceModel custom(CovarianceFunction cov, double horizon,
                                std::optional<OreyMetadata> metadata = std::nullopt,
                                std::string label = "custom");

  /// Parses "fbm:gamma=0.7", "sfbm:H=0.7", "bifbm:H=0.6,K=0.5".
  static CovarianceModel parse(std::string_view spec, double horizon = 1.0);

  ModelKind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  /// gamma for fBm, H for sfBm/bifBm; NaN for custom models.
  double hurst() const { return hurst_; }
  /// K for bifBm, 1 otherwise.
  double bifractional_k() const { return k_; }

  /// Canonical spec string; round-trips through parse() for built-ins.
  std::string spec() const;

  CovarianceModel with_horizon(double horizon) const;

  /// Covariance E X_s X_t; throws DomainError outside [0, T].
  double cov(double s, double t) const;

  /// E (X_t - X_s)^2 for 0 <= s <= t <= T.
  double incremental_variance(double s, double t) const;

  bool has_metadata() const { return metadata_.has_value(); }
  /// Throws MissingMetadataError for custom models declared without it.
  OreyMetadata orey_metadata() const;

  /// Unchecked closed-form covariance; arguments are trusted.
  double cov_unchecked(double s, double t) const;

  /// Unchecked covariance in extended precision (custom models: the callable).
  long double cov_extended(long double s, long double t) const;

 private:
  CovarianceModel() = default;

  ModelKind kind_ = ModelKind::Fbm;
  double hurst_ = 0.5;
  double k_ = 1.0;
  double horizon_ = 1.0;
  std::optional<OreyMetadata> metadata_;
  CovarianceFunction custom_;
  std::string label_;
};

}  // namespace orey
