#include "orey/asymptotics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "orey/errors.hpp"
#include "orey/power_stencil.hpp"

namespace orey {

namespace {

constexpr std::array<detail::StencilTap, 5> kRhoHatTaps{{
    {0, -3.0}, {-2, -0.5}, {2, -0.5}, {-1, 2.0}, {1, 2.0}}};

constexpr std::array<detail::StencilTap, 7> kRhoTildeTaps{{
    {1, 0.5}, {2, 1.0}, {3, -0.5}, {-1, 0.5}, {0, -2.0}, {-3, -0.5}, {-2, 1.0}}};

// Constants of the tail estimates for rho_hat and rho_tilde.
constexpr double kRhoHatTailConst = 9.0;
constexpr double kRhoTildeTailConst = 26.0;

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::ostringstream msg;
    msg << "gamma = " << gamma << " outside (0, 1)";
    throw DomainError(msg.str());
  }
}

// Upper bound for sum_{j > J} j^{4g - 8} used for both series tails.
double power_tail(double gamma, std::int64_t truncation) {
  const double q = 7.0 - 4.0 * gamma;
  return std::pow(static_cast<double>(truncation - 1), -q) / q;
}

struct TailBounds {
  double sigma11;
  double sigma12;
};

TailBounds tail_bounds(double gamma, std::int64_t truncation) {
  const double tail = power_tail(gamma, truncation);
  // Sigma11 = 2 + 4 sum (rho_hat / c)^2; Sigma12 = 2^{-2g} sum_{j in Z} (rho_tilde / c)^2.
  const double b11 = 4.0 * kRhoHatTailConst * kRhoHatTailConst * tail;
  const double b12 = std::exp2(-2.0 * gamma) * 2.0 * kRhoTildeTailConst * kRhoTildeTailConst * tail;
  return {b11, b12};
}

std::int64_t choose_truncation(double gamma, double tol) {
  const double q = 7.0 - 4.0 * gamma;
  const double worst = 2.0 * kRhoTildeTailConst * kRhoTildeTailConst;  // dominates 4 * 81
  const double guess = std::pow(worst / (tol * q), 1.0 / q) + 1.0;
  if (!std::isfinite(guess) || guess > static_cast<double>(kMaxTruncation)) {
    std::ostringstream msg;
    msg << "tolerance " << tol << " needs truncation beyond " << kMaxTruncation << " at gamma = " << gamma;
    throw TruncationError(msg.str());
  }
  std::int64_t truncation = std::max<std::int64_t>(4, static_cast<std::int64_t>(std::ceil(guess)));
  while (truncation > 4) {
    const auto b = tail_bounds(gamma, truncation - 1);
    if (b.sigma11 >= tol || b.sigma12 >= tol) break;
    --truncation;
  }
  for (;;) {
    const auto b = tail_bounds(gamma, truncation);
    if (b.sigma11 < tol && b.sigma12 < tol) return truncation;
    if (++truncation > kMaxTruncation) {
      throw TruncationError("tolerance unreachable within truncation cap");
    }
  }
}

}  // namespace

double rho_hat(double gamma, std::int64_t j) {
  return detail::power_stencil(2.0 * gamma, static_cast<double>(j), kRhoHatTaps);
}

double rho_tilde(double gamma, std::int64_t j) {
  return detail::power_stencil(2.0 * gamma, static_cast<double>(j), kRhoTildeTaps);
}

AsymptoticCovariance sigma_matrix(double gamma, double tol) {
  require_gamma(gamma);
  if (!(tol > 0.0)) throw DomainError("series tolerance must be positive");

  const std::int64_t truncation = choose_truncation(gamma, tol);
  const long double scale = 4.0L - std::exp2(2.0L * gamma);

  long double hat_sum = 0.0L;
  for (std::int64_t j = 1; j <= truncation; ++j) {
    const long double r = rho_hat(gamma, j) / scale;
    hat_sum += r * r;
  }
  long double tilde_sum = 0.0L;
  {
    const long double r0 = rho_tilde(gamma, 0) / scale;
    tilde_sum = r0 * r0;
  }
  for (std::int64_t j = 1; j <= truncation; ++j) {
    const long double rp = rho_tilde(gamma, j) / scale;
    const long double rm = rho_tilde(gamma, -j) / scale;
    tilde_sum += rp * rp + rm * rm;
  }

  AsymptoticCovariance out;
  out.gamma = gamma;
  out.sigma11 = static_cast<double>(2.0L * (1.0L + 2.0L * hat_sum));
  out.sigma22 = out.sigma11 / 2.0;
  out.sigma12 = static_cast<double>(std::exp2(-2.0L * gamma) * tilde_sum);
  out.sigma_gamma_sq = 1.5 * out.sigma11 - 2.0 * out.sigma12;
  out.truncation_j = truncation;
  const auto bounds = tail_bounds(gamma, truncation);
  out.tail_bound = std::max(bounds.sigma11, bounds.sigma12);
  return out;
}

double sigma_gamma_sq(double gamma, double tol) { return sigma_matrix(gamma, tol).sigma_gamma_sq; }

}  // namespace orey
