#pragma once

#include <vector>

#include "orey/kernels.hpp"

namespace orey {

/// Covariance restricted to the uniform grid {p T / N : p = 0..N}.
///
/// Built-in families are evaluated from tables of (p h)^{alpha} in extended
/// precision, so one entry costs a few lookups. Custom models evaluate the
/// callable at the grid points.
class GridKernel {
 public:
  GridKernel(const CovarianceModel& model, int grid_count);

  int grid_count() const { return n_; }
  double step() const { return step_; }
  const CovarianceModel& model() const { return model_; }

  /// E X_{p h} X_{q h}; p, q in [0, N].
  long double operator()(int p, int q) const;

 private:
  CovarianceModel model_;
  int n_;
  double step_;
  // pow_a_[m] = (m h)^{2H} for m = 0..2N; pow_b_ = (m h)^{2HK} for bifBm.
  std::vector<long double> pow_a_;
  std::vector<long double> pow_b_;
};

}  // namespace orey
