#pragma once

#include <span>

namespace orey::detail {

struct StencilTap {
  int offset;
  double weight;
};

/// sum_w weight * |j + offset|^alpha.
///
/// The weights of every stencil used here annihilate low-order polynomials,
/// so for large |j| the direct sum loses ~log10(j^4) digits to cancellation.
/// Far from the origin the sum is instead evaluated from the binomial
/// expansion |j|^alpha * sum_k C(alpha, k) j^{-k} sum_w w offset^k.
double power_stencil(double alpha, double j, std::span<const StencilTap> taps);

}  // namespace orey::detail
