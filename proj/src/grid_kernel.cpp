#include "orey/grid_kernel.hpp"

#include <cmath>
#include <cstdlib>

#include "orey/errors.hpp"

namespace orey {

namespace {

std::vector<long double> power_table(int count, long double step, long double exponent) {
  std::vector<long double> out(static_cast<std::size_t>(count) + 1);
  out[0] = 0.0L;
  for (int m = 1; m <= count; ++m) {
    out[m] = std::exp(exponent * std::log(static_cast<long double>(m) * step));
  }
  return out;
}

}  // namespace

GridKernel::GridKernel(const CovarianceModel& model, int grid_count)
    : model_(model), n_(grid_count), step_(model.horizon() / grid_count) {
  if (grid_count < 1) throw DomainError("grid count must be positive");
  const long double h = static_cast<long double>(model.horizon()) / grid_count;
  const long double two_h = 2.0L * model.hurst();
  switch (model.kind()) {
    case ModelKind::Fbm:
      pow_a_ = power_table(n_, h, two_h);
      break;
    case ModelKind::Sfbm:
      pow_a_ = power_table(2 * n_, h, two_h);
      break;
    case ModelKind::Bifbm:
      pow_a_ = power_table(n_, h, two_h);
      pow_b_ = power_table(n_, h, two_h * model.bifractional_k());
      break;
    case ModelKind::Custom:
      break;
  }
}

long double GridKernel::operator()(int p, int q) const {
  switch (model_.kind()) {
    case ModelKind::Fbm:
      return 0.5L * (pow_a_[p] + pow_a_[q] - pow_a_[std::abs(p - q)]);
    case ModelKind::Sfbm:
      return pow_a_[p] + pow_a_[q] - 0.5L * (pow_a_[p + q] + pow_a_[std::abs(p - q)]);
    case ModelKind::Bifbm: {
      const long double sum = pow_a_[p] + pow_a_[q];
      const long double k = model_.bifractional_k();
      const long double head = sum == 0.0L ? 0.0L : std::exp(k * std::log(sum));
      return std::exp2(-k) * (head - pow_b_[std::abs(p - q)]);
    }
    case ModelKind::Custom:
      return model_.cov_unchecked(p * step_, q * step_);
  }
  return 0.0L;
}

}  // namespace orey
