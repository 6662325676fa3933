#include "orey/power_stencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace orey::detail {

namespace {

constexpr int kMaxSeriesTerms = 80;
constexpr std::size_t kMaxTaps = 16;

long double pow_abs_ld(long double x, long double p) {
  const long double a = std::fabs(x);
  return a == 0.0L ? 0.0L : std::exp(p * std::log(a));
}

}  // namespace

double power_stencil(double alpha, double j, std::span<const StencilTap> taps) {
  int reach = 0;
  for (const auto& tap : taps) reach = std::max(reach, std::abs(tap.offset));

  const long double aj = std::fabs(static_cast<long double>(j));
  if (aj < 4.0L * reach + 4.0L || taps.size() > kMaxTaps) {
    long double sum = 0.0L;
    for (const auto& tap : taps) {
      sum += tap.weight * pow_abs_ld(static_cast<long double>(j) + tap.offset, alpha);
    }
    return static_cast<double>(sum);
  }

  // |j + x| = |j| (1 + x/j) for |x| < |j|; expand (1 + x/j)^alpha.
  const long double inv = 1.0L / static_cast<long double>(j);
  long double binom = 1.0L;  // C(alpha, k)
  long double inv_pow = 1.0L;
  long double acc = 0.0L;
  std::array<long double, kMaxTaps> powers;
  powers.fill(1.0L);
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    long double moment = 0.0L;
    long double bound = 0.0L;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      moment += taps[i].weight * powers[i];
      bound += std::fabs(taps[i].weight * powers[i]);
      powers[i] *= taps[i].offset;
    }
    acc += binom * inv_pow * moment;
    // Odd moments of symmetric stencils vanish, so stop on the term bound.
    if (k > 4 && acc != 0.0L && std::fabs(binom * inv_pow) * bound < 1e-21L * std::fabs(acc)) break;
    binom *= (static_cast<long double>(alpha) - k) / (k + 1);
    inv_pow *= inv;
  }
  return static_cast<double>(pow_abs_ld(aj, alpha) * acc);
}

}  // namespace orey::detail
