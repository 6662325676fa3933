#include "orey/estimator.hpp"

#include <boost/math/distributions/normal.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orey/asymptotics.hpp"
#include "orey/errors.hpp"
#include "orey/quadvar.hpp"

namespace orey {

namespace {

constexpr double kMinCiGamma = 0.01;
constexpr double kMaxCiGamma = 0.99;

}  // namespace

EstimateResult gamma_hat(const GridPath& path) {
  if (path.n % 2 != 0 || path.n < 8) {
    throw DomainError("estimator needs a path with 2n + 1 points and n >= 4");
  }
  EstimateResult out;
  out.n = path.n / 2;
  out.v_2n = vstat(second_diffs(path, 2));
  out.v_n = vstat(second_diffs(path, 1));
  // Affine paths read from decimal text leave only rounding noise behind.
  double peak = 0.0;
  for (double v : path.values) peak = std::max(peak, std::fabs(v));
  const double floor = std::pow(64.0 * std::numeric_limits<double>::epsilon() * peak, 2) * path.n;
  if (!(out.v_n > floor) || !(out.v_2n > floor)) {
    throw DegenerateInputError("degenerate path: quadratic variation statistic is zero");
  }
  out.gamma_hat = 0.5 - std::log(out.v_2n / out.v_n) / (2.0 * std::numbers::ln2);
  return out;
}

std::optional<ConfidenceInterval> confidence_interval(const EstimateResult& result, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (!(result.gamma_hat > kMinCiGamma && result.gamma_hat < kMaxCiGamma)) return std::nullopt;

  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(standard, 0.5 * (1.0 + level));
  ConfidenceInterval ci;
  ci.level = level;
  ci.sigma = std::sqrt(sigma_gamma_sq(result.gamma_hat));
  const double half = z * ci.sigma / (2.0 * std::numbers::ln2 * std::sqrt(static_cast<double>(result.n)));
  ci.low = result.gamma_hat - half;
  ci.high = result.gamma_hat + half;
  return ci;
}

EstimateResult estimate(const GridPath& path, std::optional<double> ci_level) {
  auto result = gamma_hat(path);
  if (ci_level) {
    result.ci = confidence_interval(result, *ci_level);
    if (!result.ci) {
      std::ostringstream msg;
      msg << "gamma_hat = " << result.gamma_hat << " outside (" << kMinCiGamma << ", " << kMaxCiGamma
          << "); confidence interval omitted";
      result.warning = msg.str();
    }
  }
  return result;
}

double scaled_qv(const GridPath& path, const OreyMetadata& metadata) {
  const double v = vstat(second_diffs(path, 2));
  return std::pow(path.n / path.horizon, 2.0 * metadata.gamma - 1.0) * v;
}

double scaled_qv_limit(const OreyMetadata& metadata, double horizon) {
  return metadata.kappa * metadata.kappa * (4.0 - std::exp2(2.0 * metadata.gamma)) * horizon;
}

}  // namespace orey
