#include "orey/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "orey/errors.hpp"

namespace orey {

namespace {

void require_unit_interval(double value, const char* name, bool closed_right = false) {
  const bool ok = value > 0.0 && (closed_right ? value <= 1.0 : value < 1.0);
  if (!ok || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "parameter " << name << " = " << value << " outside (0, 1" << (closed_right ? "]" : ")");
    throw DomainError(msg.str());
  }
}

void require_positive_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("horizon T must be positive and finite");
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << v;
  std::string s = out.str();
  // Prefer the shortest form that parses back to the same value.
  for (int p = 1; p < std::numeric_limits<double>::max_digits10; ++p) {
    std::ostringstream shorter;
    shorter.precision(p);
    shorter << v;
    if (std::stod(shorter.str()) == v) return shorter.str();
  }
  return s;
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("malformed number '" + std::string(text) + "' in model spec '" +
                      std::string(spec) + "'");
  }
  return value;
}

}  // namespace

double pow_abs(double x, double p) {
  const double a = std::fabs(x);
  if (a == 0.0) return 0.0;
  return std::exp(p * std::log(a));
}

CovarianceModel CovarianceModel::fbm(double gamma, double horizon) {
  require_unit_interval(gamma, "gamma");
  require_positive_horizon(horizon);
  CovarianceModel m;
  m.kind_ = ModelKind::Fbm;
  m.hurst_ = gamma;
  m.horizon_ = horizon;
  m.metadata_ = OreyMetadata{gamma, 1.0};
  return m;
}

CovarianceModel CovarianceModel::sfbm(double hurst, double horizon) {
  require_unit_interval(hurst, "H");
  require_positive_horizon(horizon);
  CovarianceModel m;
  m.kind_ = ModelKind::Sfbm;
  m.hurst_ = hurst;
  m.horizon_ = horizon;
  m.metadata_ = OreyMetadata{hurst, 1.0};
  return m;
}

CovarianceModel CovarianceModel::bifbm(double hurst, double k, double horizon) {
  require_unit_interval(hurst, "H");
  require_unit_interval(k, "K", /*closed_right=*/true);
  require_positive_horizon(horizon);
  CovarianceModel m;
  m.kind_ = ModelKind::Bifbm;
  m.hurst_ = hurst;
  m.k_ = k;
  m.horizon_ = horizon;
  // Incremental variance behaves like 2^{1-K} h^{2HK} for small h.
  m.metadata_ = OreyMetadata{hurst * k, std::exp2((1.0 - k) / 2.0)};
  return m;
}

CovarianceModel CovarianceModel::custom(CovarianceFunction cov, double horizon,
                                        std::optional<OreyMetadata> metadata, std::string label) {
  if (!cov) throw DomainError("custom covariance callable is empty");
  require_positive_horizon(horizon);
  if (metadata) {
    require_unit_interval(metadata->gamma, "gamma");
    if (!(metadata->kappa > 0.0)) throw DomainError("kappa must be positive");
  }
  CovarianceModel m;
  m.kind_ = ModelKind::Custom;
  m.hurst_ = std::numeric_limits<double>::quiet_NaN();
  m.horizon_ = horizon;
  m.metadata_ = metadata;
  m.custom_ = std::move(cov);
  m.label_ = std::move(label);
  return m;
}

CovarianceModel CovarianceModel::parse(std::string_view spec, double horizon) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw FormatError("model spec '" + std::string(spec) + "' lacks ':' (expected e.g. fbm:gamma=0.7)");
  }
  const std::string_view family = spec.substr(0, colon);
  std::map<std::string, double, std::less<>> params;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw FormatError("malformed parameter '" + std::string(item) + "' in model spec '" +
                        std::string(spec) + "'");
    }
    const std::string key(item.substr(0, eq));
    if (params.count(key) != 0) {
      throw FormatError("duplicate parameter '" + key + "' in model spec '" + std::string(spec) + "'");
    }
    params[key] = parse_number(item.substr(eq + 1), spec);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }

  auto take = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) {
      throw FormatError("model spec '" + std::string(spec) + "' is missing parameter " + key);
    }
    double v = it->second;
    params.erase(it);
    return v;
  };
  auto finish = [&](CovarianceModel m) {
    if (!params.empty()) {
      throw FormatError("unknown parameter '" + params.begin()->first + "' in model spec '" +
                        std::string(spec) + "'");
    }
    return m;
  };

  if (family == "fbm") {
    const double g = take("gamma");
    return finish(fbm(g, horizon));
  }
  if (family == "sfbm") {
    const double h = take("H");
    return finish(sfbm(h, horizon));
  }
  if (family == "bifbm") {
    const double h = take("H");
    const double k = take("K");
    return finish(bifbm(h, k, horizon));
  }
  throw FormatError("unknown model family '" + std::string(family) + "' (expected fbm, sfbm or bifbm)");
}

std::string CovarianceModel::spec() const {
  switch (kind_) {
    case ModelKind::Fbm:
      return "fbm:gamma=" + format_double(hurst_);
    case ModelKind::Sfbm:
      return "sfbm:H=" + format_double(hurst_);
    case ModelKind::Bifbm:
      return "bifbm:H=" + format_double(hurst_) + ",K=" + format_double(k_);
    case ModelKind::Custom:
      return label_;
  }
  return label_;
}

CovarianceModel CovarianceModel::with_horizon(double horizon) const {
  require_positive_horizon(horizon);
  CovarianceModel m = *this;
  m.horizon_ = horizon;
  return m;
}

double CovarianceModel::cov_unchecked(double s, double t) const {
  switch (kind_) {
    case ModelKind::Fbm: {
      const double p = 2.0 * hurst_;
      return 0.5 * (pow_abs(s, p) + pow_abs(t, p) - pow_abs(t - s, p));
    }
    case ModelKind::Sfbm: {
      const double p = 2.0 * hurst_;
      return pow_abs(s, p) + pow_abs(t, p) - 0.5 * (pow_abs(s + t, p) + pow_abs(s - t, p));
    }
    case ModelKind::Bifbm: {
      const double p = 2.0 * hurst_;
      const double sum = pow_abs(s, p) + pow_abs(t, p);
      return std::exp2(-k_) * (pow_abs(sum, k_) - pow_abs(t - s, p * k_));
    }
    case ModelKind::Custom:
      return custom_(s, t);
  }
  return 0.0;
}

long double CovarianceModel::cov_extended(long double s, long double t) const {
  auto pw = [](long double x, long double p) {
    const long double a = std::fabs(x);
    return a == 0.0L ? 0.0L : std::exp(p * std::log(a));
  };
  const long double p = 2.0L * hurst_;
  switch (kind_) {
    case ModelKind::Fbm:
      return 0.5L * (pw(s, p) + pw(t, p) - pw(t - s, p));
    case ModelKind::Sfbm:
      return pw(s, p) + pw(t, p) - 0.5L * (pw(s + t, p) + pw(s - t, p));
    case ModelKind::Bifbm: {
      const long double k = k_;
      return std::exp2(-k) * (pw(pw(s, p) + pw(t, p), k) - pw(t - s, p * k));
    }
    case ModelKind::Custom:
      return custom_(static_cast<double>(s), static_cast<double>(t));
  }
  return 0.0L;
}

double CovarianceModel::cov(double s, double t) const {
  // Grid points computed as k*T/n may overshoot T by an ulp or two.
  const double slack = 1e-12 * horizon_;
  if (!(s >= -slack && s <= horizon_ + slack && t >= -slack && t <= horizon_ + slack)) {
    std::ostringstream msg;
    msg << "cov(" << s << ", " << t << ") outside [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
  return cov_unchecked(std::max(s, 0.0), std::max(t, 0.0));
}

double CovarianceModel::incremental_variance(double s, double t) const {
  if (s > t) throw DomainError("incremental_variance requires s <= t");
  if (s == t) return 0.0;
  const double v = cov(t, t) - 2.0 * cov(s, t) + cov(s, s);
  if (v < -1e-12) {
    std::ostringstream msg;
    msg << "incremental variance " << v << " < 0 on [" << s << ", " << t << "] for " << spec();
    throw NumericalError(msg.str());
  }
  return std::max(v, 0.0);
}

OreyMetadata CovarianceModel::orey_metadata() const {
  if (!metadata_) {
    throw MissingMetadataError("model '" + spec() + "' has no declared Orey index / kappa");
  }
  return *metadata_;
}

}  // namespace orey
