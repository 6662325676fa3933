#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "orey/asymptotics.hpp"
#include "orey/kernels.hpp"
#include "orey/quadvar.hpp"

namespace orey {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Dyadic grid 2^lo, ..., 2^hi.
std::vector<int> dyadic_grid(int lo_exponent, int hi_exponent);

/// Least-squares slope of log y against log x; NaN if any y <= 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------- row sums

/// Bounded if the last max row sum exceeds its predecessor by at most 5%.
inline constexpr double kRowSumGrowthTolerance = 0.05;

struct RowSumCheck {
  std::vector<int> n_grid;
  std::vector<std::array<double, 2>> row_sum_max;  // levels n and 2n
  double growth_tolerance = kRowSumGrowthTolerance;
  Verdict verdict = Verdict::Inconclusive;
};

RowSumCheck check_row_sums(const CovarianceModel& model, const std::vector<int>& n_grid,
                           NormalizationMode mode = NormalizationMode::Orey, int threads = 1);

// ---------------------------------------------------------------- scaled cov

struct ScaledCovCheck {
  std::vector<int> n_grid;
  /// n cov(V_in/(in), V_jn/(jn)) as {11, 12, 21, 22}.
  std::vector<std::array<double, 4>> values;
  std::vector<std::array<double, 4>> gaps;  // |value - Sigma_ij|
  AsymptoticCovariance target;
  Verdict verdict = Verdict::Inconclusive;
};

/// Pass when the largest gap is nonincreasing along the grid and ends below
/// where it started.
ScaledCovCheck check_scaled_cov(const CovarianceModel& model, const std::vector<int>& n_grid,
                                int threads = 1);

// ---------------------------------------------------------------- fBm gap

inline constexpr double kGapSlopeD = -0.8;
inline constexpr double kGapSlopeC = -0.4;

struct FbmGapCheck {
  std::vector<int> n_grid;
  /// (1/n) sum |d_X^2 - d_B^2| over the upper triangle incl. diagonal, levels n and 2n.
  std::vector<std::array<double, 2>> d_sum;
  /// Diagonal part of d_sum, levels n and 2n.
  std::vector<std::array<double, 2>> d_diag_sum;
  /// (1/n) sum |c_X^2 - c_B^2|.
  std::vector<double> c_sum;
  std::array<double, 2> d_slope{};
  double c_slope = 0.0;
  double d_slope_threshold = kGapSlopeD;
  double c_slope_threshold = kGapSlopeC;
  Verdict verdict = Verdict::Inconclusive;
};

/// Compares the model's Orey-normalized coefficients with those of the fBm
/// sharing its Orey index.
FbmGapCheck check_fbm_gap(const CovarianceModel& model, const std::vector<int>& n_grid,
                          int threads = 1);

// ---------------------------------------------------------------- bias

inline constexpr double kBiasSlope = -0.4;

struct BiasCheck {
  std::vector<int> n_grid;
  /// sqrt(n) ((in)^{-1} E V-hat_in - 1), levels n and 2n.
  std::vector<std::array<double, 2>> bias;
  std::array<double, 2> slope{};
  double slope_threshold = kBiasSlope;
  Verdict verdict = Verdict::Inconclusive;
};

BiasCheck check_bias(const CovarianceModel& model, const std::vector<int>& n_grid);

// ---------------------------------------------------------------- sfBm

/// b(k,H) = 2^{2H-1}(k+1)^{2H} + 3 2^{2H} k^{2H} + 2^{2H-1}(k-1)^{2H}
///          - 2(2k+1)^{2H} - 2(2k-1)^{2H}, evaluated without cancellation.
double sfbm_b(int k, double hurst);

/// Largest |b(k,H)| / (4 - 2^{2H}) / (3 k^{2H-4}) over k in [3, k_max] and
/// the H grid; the bound holds iff the result is <= 1.
double sfbm_b_bound_ratio(const std::vector<double>& h_grid, int k_max);

/// max_H d_11 of sfBm = 1 - b(1,H) / (4 - 2^{2H}) and max_H |b(1,H)| / (4 - 2^{2H}).
struct SfbmDiagonalExtremes {
  double d11_max = 0.0;
  double b1_ratio_max = 0.0;
};
SfbmDiagonalExtremes sfbm_diagonal_extremes(const std::vector<double>& h_grid);

/// |rho_tilde_H(3)| / (2^H (4 - 2^{2H})).
double rho_tilde3_ratio(double hurst);

/// Largest rho_tilde3_ratio over the grid.
double rho_tilde3_bound(const std::vector<double>& h_grid);

/// Largest |rho_hat_g(j)| / (4 - 2^{2g}) / (9 j^{2g-4}) over j in [3, j_max]
/// and |rho_tilde_g(j)| / (4 - 2^{2g}) / (26 |j|^{2g-4}) over 4 <= |j| <= j_max.
struct TailBoundScan {
  double rho_hat_ratio = 0.0;
  double rho_tilde_ratio = 0.0;
};
TailBoundScan tail_bound_scan(const std::vector<double>& gamma_grid, int j_max);

/// Largest deviation of E[(S_v - S_u)(S_t - S_s)] - E[(B_v - B_u)(B_t - B_s)]
/// from ((t+u)^{2H} - (t+v)^{2H} + (s+v)^{2H} - (s+u)^{2H}) / 2 over random
/// ordered tuples 0 <= u < v <= s < t <= T.
double sfbm_difference_identity_error(double hurst, int samples, std::uint64_t seed);

/// Largest deviations of the sfBm-minus-fBm coefficient identities at grid n:
///   d^S_{kj} - d^B_{kj} = rho_hat(j+k) / (4 - 2^{2H})       (|j-k| >= 1)
///   d^S_{kk}            = 1 - b(k,H) / (4 - 2^{2H})
///   c^S_{jk} - c^B_{jk} = rho_tilde(2j+k) / (2^H (4 - 2^{2H}))
struct SfbmIdentityErrors {
  double off_diagonal = 0.0;
  double diagonal = 0.0;
  double cross = 0.0;
};
SfbmIdentityErrors sfbm_coefficient_identity_errors(double hurst, int n);

// ---------------------------------------------------------------- Begyn 3(e)

/// D(t,h) = E(X_{t+2h} - 2X_{t+h} + X_t)(X_{t+h} - 2X_t + X_{t-h}) / h^{2 gamma}.
double begyn_ratio(const CovarianceModel& model, double gamma, double t, double h);

/// kappa^2 rho_hat_gamma(1): the fixed-t limit of D(t,h).
double begyn_candidate_limit(double gamma, double kappa);

/// sfBm, t = m h: D(mh,h) - limit, exact:
/// 2^{2H+1} m^{2H} - (2m-1)^{2H}/2 - 3(2m+1)^{2H} + 2^{2H+1}(m+1)^{2H} - (2m+3)^{2H}/2.
double sfbm_grid_aligned_residual(double hurst, int m);
/// The literature closed form m^{2H}(2^{2H+1} - 1/2 - 3^{2H+1} + 2^{2H+2} - 5^{2H}/2).
double sfbm_grid_aligned_residual_published(double hurst, int m);

struct BegynTrack {
  double t = 0.0;        // fixed-t tracks
  int m = 0;             // grid-aligned tracks (t = m h)
  std::vector<double> h;
  std::vector<double> ratio;     // D(t, h)
  std::vector<double> residual;  // D(t, h) - candidate limit
  double rate = 0.0;             // log-log slope of |residual| vs h (fixed-t only)
  std::optional<double> expected_residual;   // sfBm grid-aligned exact form
  std::optional<double> published_residual;  // sfBm grid-aligned literature form
  std::string note;
};

struct BegynReport {
  double gamma = 0.0;
  double candidate_limit = 0.0;
  std::vector<BegynTrack> fixed_tracks;
  std::vector<BegynTrack> aligned_tracks;
};

std::vector<double> default_begyn_h_sequence();  // 2^{-3}, ..., 2^{-14}
std::vector<double> default_begyn_t_grid();      // 0.17, 0.37, 0.61, 0.83
std::vector<int> default_begyn_m_grid();         // 1, 2, 3, 5

/// h_sequence must be strictly decreasing; tracks that leave [0, T] are
/// truncated and annotated.
BegynReport begyn_3e(const CovarianceModel& model, double gamma, const std::vector<double>& t_grid,
                     const std::vector<double>& h_sequence,
                     const std::vector<int>& m_grid = default_begyn_m_grid());

/// bifBm grid-aligned limit mu_h(h) / h^{2HK} at t = h.
struct BifbmBegyn {
  double hurst = 0.0;
  double k = 0.0;
  std::vector<double> h;
  std::vector<double> direct;   // from the covariance stencil
  double closed_form = 0.0;     // exact expansion of the stencil
  double published = 0.0;       // literature closed form
};

/// 2^{-K}[(3^{2H}+2^{2H})^K - 2(3^{2H}+1)^K + 3^{2HK} - 2^{K+1} 2^{2HK}
///        + 5(2^{2H}+1)^K - 2^{2HK+1} - 2^{K+1} + 1].
double bifbm_grid_aligned_limit(double hurst, double k);
/// 2^{-K}[(3^{2H}+2^{2H})^K - 2(3^{2H}+1)^K - (2^K+1)2^{2KH} + (2^{1-K}+3)(2^{2H}+1)^K
///        - (2^K+1) + 3^{2KH} - 2^{2KH+1} + 1].
double bifbm_grid_aligned_limit_published(double hurst, double k);

BifbmBegyn begyn_3e_bifbm(double hurst, double k, const std::vector<double>& h_sequence);

// ---------------------------------------------------------------- report

struct ConditionReport {
  std::string model;
  std::vector<int> n_grid;
  std::optional<RowSumCheck> row_sums;
  std::optional<ScaledCovCheck> scaled_cov;
  std::optional<FbmGapCheck> fbm_gap;
  std::optional<BiasCheck> bias;
  std::optional<BegynReport> begyn;

  /// Fail if any check failed, else Inconclusive if any was, else Pass.
  Verdict overall() const;
};

struct VerifyOptions {
  bool row_sums = true;
  bool scaled_cov = true;
  bool fbm_gap = true;
  bool bias = true;
  bool begyn = true;
  int n_min = 32;
  int n_max = 1024;
  int threads = 1;
};

ConditionReport verify(const CovarianceModel& model, const VerifyOptions& options);

}  // namespace orey
