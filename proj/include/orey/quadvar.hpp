#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "orey/grid_kernel.hpp"
#include "orey/kernels.hpp"
#include "orey/pathgen.hpp"

namespace orey {

/// How second differences are standardized.
///   ExactVariance: divide by sqrt(E (Delta^2 X)^2) entrywise.
///   Orey:          divide by kappa sqrt(4 - 2^{2 gamma}) (T / (i n))^gamma.
enum class NormalizationMode { ExactVariance, Orey };

std::string to_string(NormalizationMode mode);
NormalizationMode parse_normalization(std::string_view text);

/// Unnormalized second differences X_{(k+1)h} - 2 X_{kh} + X_{(k-1)h}, k = 1..m-1.
/// level 2 uses every point of the path (m = path.n); level 1 uses every
/// second point (m = path.n / 2, path.n must be even).
std::vector<double> second_diffs(const GridPath& path, int level);

/// Normalized second differences; the model supplies the expected squares
/// (ExactVariance) or the Orey metadata (Orey).
std::vector<double> second_diffs(const GridPath& path, int level, NormalizationMode mode,
                                 const CovarianceModel& model);

/// Sum of squares.
double vstat(std::span<const double> diffs);

/// Exact second moments of normalized second differences of a model on the
/// dyadic pair of grids {kT/n} and {kT/(2n)}. Every entry is the 9-term
/// second-difference stencil applied to the covariance.
class SecondMoments {
 public:
  SecondMoments(const CovarianceModel& model, int n, NormalizationMode mode);

  int n() const { return n_; }
  NormalizationMode mode() const { return mode_; }
  const CovarianceModel& model() const { return kernel_.model(); }

  /// Number of second differences at a level: level * n - 1.
  int count(int level) const { return level * n_ - 1; }

  /// E Delta^2_{level n, j} X Delta^2_{level' n, k} X, unnormalized; 1-based indices.
  double raw(int level_j, int j, int level_k, int k) const;
  /// d^{level}_{j,k}; 1-based indices.
  double d(int level, int j, int k) const;
  /// c_{j,k} = E Delta-hat_{n,j} Delta-hat_{2n,k}; 1 <= j <= n-1, 1 <= k <= 2n-1.
  double c(int j, int k) const;
  /// Normalizer of Delta^2_{level n, k} X.
  double scale(int level, int k) const;

 private:
  GridKernel kernel_;
  int n_;
  NormalizationMode mode_;
  std::array<std::vector<double>, 2> scale_;
};

/// Dense d (levels n and 2n) and c matrices, 0-based storage.
struct CoefficientSet {
  int n = 0;
  NormalizationMode mode = NormalizationMode::Orey;
  Eigen::MatrixXd d_n;   // (n-1) x (n-1)
  Eigen::MatrixXd d_2n;  // (2n-1) x (2n-1)
  Eigen::MatrixXd c;     // (n-1) x (2n-1)

  const Eigen::MatrixXd& d(int level) const { return level == 1 ? d_n : d_2n; }
};

inline constexpr int kMaxDenseCoefficients = 4096;

/// Materializes all coefficients; n must lie in [4, 4096].
CoefficientSet coefficients(const CovarianceModel& model, int n, NormalizationMode mode,
                            int threads = 1);

/// Aggregates computed row by row without storing the matrices.
struct CoefficientAggregates {
  int n = 0;
  NormalizationMode mode = NormalizationMode::Orey;
  std::array<double, 2> row_sum_max{};  // max_k sum_j |d_{j,k}| at levels n, 2n
  std::array<double, 2> expected_v{};   // E V-hat = trace d
  std::array<double, 2> var_v{};        // Var V-hat
  double cov_v = 0.0;                   // cov(V-hat_n, V-hat_2n)
};

CoefficientAggregates coefficient_aggregates(const CovarianceModel& model, int n,
                                             NormalizationMode mode, int threads = 1);
CoefficientAggregates coefficient_aggregates(const SecondMoments& moments, int threads = 1);

/// Var V = 2 sum_k d_kk^2 + 4 sum_{k < m} d_km^2.
double isserlis_var(const Eigen::MatrixXd& d);
/// cov(V_n, V_2n) = 2 sum_{j,k} c_jk^2.
double isserlis_cov(const Eigen::MatrixXd& c);

/// n cov(V_in / (i n), V_jn / (j n)) for i, j in {1, 2}.
double scaled_cov(const CoefficientAggregates& agg, int i, int j);
double scaled_cov(const CovarianceModel& model, int n, int i, int j,
                  NormalizationMode mode = NormalizationMode::Orey, int threads = 1);

}  // namespace orey
