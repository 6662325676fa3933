#include "orey/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orey/errors.hpp"
#include "orey/parallel.hpp"
#include "orey/power_stencil.hpp"
#include "orey/rng.hpp"

namespace orey {

namespace {

// Values this small count as an exact match (e.g. the model is fBm itself).
constexpr double kNegligible = 1e-13;

bool all_negligible(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::fabs(x) <= kNegligible; });
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] * (1.0 + 1e-9) + kNegligible) return false;
  }
  return true;
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

double c_gamma(double gamma) { return 4.0 - std::exp2(2.0 * gamma); }

void require_grid(const std::vector<int>& n_grid) {
  if (n_grid.empty()) throw DomainError("empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 4) throw DomainError("n grid entries must be >= 4");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n grid must be increasing");
  }
}

RowSumCheck row_sums_from(const std::vector<int>& n_grid, const std::vector<CoefficientAggregates>& aggs) {
  RowSumCheck out;
  out.n_grid = n_grid;
  for (const auto& a : aggs) out.row_sum_max.push_back(a.row_sum_max);
  out.verdict = Verdict::Pass;
  if (out.row_sum_max.size() < 2) {
    out.verdict = Verdict::Inconclusive;
    return out;
  }
  const auto& last = out.row_sum_max.back();
  const auto& prev = out.row_sum_max[out.row_sum_max.size() - 2];
  for (int level = 0; level < 2; ++level) {
    if (!std::isfinite(last[level]) || last[level] > prev[level] * (1.0 + out.growth_tolerance)) {
      out.verdict = Verdict::Fail;
    }
  }
  return out;
}

ScaledCovCheck scaled_cov_from(const CovarianceModel& model, const std::vector<int>& n_grid,
                               const std::vector<CoefficientAggregates>& aggs) {
  ScaledCovCheck out;
  out.n_grid = n_grid;
  out.target = sigma_matrix(model.orey_metadata().gamma);
  const std::array<double, 4> target{out.target.sigma11, out.target.sigma12, out.target.sigma12,
                                     out.target.sigma22};
  std::vector<double> worst;
  for (const auto& a : aggs) {
    const std::array<double, 4> v{scaled_cov(a, 1, 1), scaled_cov(a, 1, 2), scaled_cov(a, 2, 1),
                                  scaled_cov(a, 2, 2)};
    std::array<double, 4> g{};
    for (int e = 0; e < 4; ++e) g[e] = std::fabs(v[e] - target[e]);
    out.values.push_back(v);
    out.gaps.push_back(g);
    worst.push_back(*std::max_element(g.begin(), g.end()));
  }
  if (worst.size() < 2) {
    out.verdict = Verdict::Inconclusive;
  } else if (nonincreasing(worst) && worst.back() < worst.front()) {
    out.verdict = Verdict::Pass;
  } else if (worst.back() < worst.front()) {
    out.verdict = Verdict::Inconclusive;
  } else {
    out.verdict = Verdict::Fail;
  }
  return out;
}

std::vector<CoefficientAggregates> aggregates_over(const CovarianceModel& model,
                                                   const std::vector<int>& n_grid,
                                                   NormalizationMode mode, int threads) {
  std::vector<CoefficientAggregates> out;
  out.reserve(n_grid.size());
  for (int n : n_grid) out.push_back(coefficient_aggregates(model, n, mode, threads));
  return out;
}

long double pow_ld(long double x, long double p) {
  const long double a = std::fabs(x);
  return a == 0.0L ? 0.0L : std::exp(p * std::log(a));
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<int> dyadic_grid(int lo_exponent, int hi_exponent) {
  std::vector<int> out;
  for (int e = lo_exponent; e <= hi_exponent; ++e) out.push_back(1 << e);
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

RowSumCheck check_row_sums(const CovarianceModel& model, const std::vector<int>& n_grid,
                           NormalizationMode mode, int threads) {
  require_grid(n_grid);
  return row_sums_from(n_grid, aggregates_over(model, n_grid, mode, threads));
}

ScaledCovCheck check_scaled_cov(const CovarianceModel& model, const std::vector<int>& n_grid,
                                int threads) {
  require_grid(n_grid);
  return scaled_cov_from(model, n_grid, aggregates_over(model, n_grid, NormalizationMode::Orey, threads));
}

FbmGapCheck check_fbm_gap(const CovarianceModel& model, const std::vector<int>& n_grid, int threads) {
  require_grid(n_grid);
  const auto meta = model.orey_metadata();
  const auto reference = CovarianceModel::fbm(meta.gamma, model.horizon());

  FbmGapCheck out;
  out.n_grid = n_grid;
  for (int n : n_grid) {
    const SecondMoments mx(model, n, NormalizationMode::Orey);
    const SecondMoments mb(reference, n, NormalizationMode::Orey);
    // task t < n-1: level-n row; next 2n-1 tasks: level-2n rows.
    const std::size_t tasks = static_cast<std::size_t>(3 * n - 2);
    std::vector<long double> diag(tasks, 0.0L), upper(tasks, 0.0L), cross(n - 1, 0.0L);
    parallel_for(tasks, threads, [&](std::size_t task) {
      const int level = task < static_cast<std::size_t>(n - 1) ? 1 : 2;
      const int j = level == 1 ? static_cast<int>(task) + 1 : static_cast<int>(task) - (n - 1) + 1;
      const int count = level * n - 1;
      {
        const long double x = mx.d(level, j, j), b = mb.d(level, j, j);
        diag[task] = std::fabs(x * x - b * b);
      }
      long double acc = 0.0L;
      for (int k = j + 1; k <= count; ++k) {
        const long double x = mx.d(level, j, k), b = mb.d(level, j, k);
        acc += std::fabs(x * x - b * b);
      }
      upper[task] = acc;
      if (level == 1) {
        long double c_acc = 0.0L;
        for (int k = 1; k < 2 * n; ++k) {
          const long double x = mx.c(j, k), b = mb.c(j, k);
          c_acc += std::fabs(x * x - b * b);
        }
        cross[task] = c_acc;
      }
    });
    std::array<long double, 2> d_diag{0.0L, 0.0L}, d_upper{0.0L, 0.0L};
    for (std::size_t task = 0; task < tasks; ++task) {
      const int li = task < static_cast<std::size_t>(n - 1) ? 0 : 1;
      d_diag[li] += diag[task];
      d_upper[li] += upper[task];
    }
    long double c_total = 0.0L;
    for (auto v : cross) c_total += v;
    out.d_diag_sum.push_back({static_cast<double>(d_diag[0] / n), static_cast<double>(d_diag[1] / n)});
    out.d_sum.push_back({static_cast<double>((d_diag[0] + d_upper[0]) / n),
                         static_cast<double>((d_diag[1] + d_upper[1]) / n)});
    out.c_sum.push_back(static_cast<double>(c_total / n));
  }

  const auto xs = as_doubles(n_grid);
  std::vector<double> d1, d2;
  for (const auto& v : out.d_sum) {
    d1.push_back(v[0]);
    d2.push_back(v[1]);
  }
  out.d_slope = {log_log_slope(xs, d1), log_log_slope(xs, d2)};
  out.c_slope = log_log_slope(xs, out.c_sum);

  if (all_negligible(d1) && all_negligible(d2) && all_negligible(out.c_sum)) {
    out.verdict = Verdict::Pass;
  } else if (n_grid.size() < 3 || std::isnan(out.d_slope[0]) || std::isnan(out.d_slope[1]) ||
             std::isnan(out.c_slope)) {
    out.verdict = Verdict::Inconclusive;
  } else {
    const bool ok = out.d_slope[0] <= out.d_slope_threshold && out.d_slope[1] <= out.d_slope_threshold &&
                    out.c_slope <= out.c_slope_threshold;
    out.verdict = ok ? Verdict::Pass : Verdict::Fail;
  }
  return out;
}

BiasCheck check_bias(const CovarianceModel& model, const std::vector<int>& n_grid) {
  require_grid(n_grid);
  BiasCheck out;
  out.n_grid = n_grid;
  for (int n : n_grid) {
    const SecondMoments m(model, n, NormalizationMode::Orey);
    std::array<double, 2> b{};
    for (int level = 1; level <= 2; ++level) {
      long double trace = 0.0L;
      for (int k = 1; k < level * n; ++k) trace += m.d(level, k, k);
      const long double ratio = trace / (static_cast<long double>(level) * n);
      b[level - 1] = static_cast<double>(std::sqrt(static_cast<long double>(n)) * (ratio - 1.0L));
    }
    out.bias.push_back(b);
  }

  const auto xs = as_doubles(n_grid);
  out.verdict = Verdict::Pass;
  for (int level = 0; level < 2; ++level) {
    std::vector<double> mag;
    for (const auto& b : out.bias) mag.push_back(std::fabs(b[level]));
    out.slope[level] = log_log_slope(xs, mag);
    Verdict v;
    if (all_negligible(mag)) {
      v = Verdict::Pass;
    } else if (n_grid.size() < 3 || std::isnan(out.slope[level])) {
      v = Verdict::Inconclusive;
    } else {
      v = nonincreasing(mag) && out.slope[level] <= out.slope_threshold ? Verdict::Pass : Verdict::Fail;
    }
    out.verdict = combine(out.verdict, v);
  }
  return out;
}

// ---------------------------------------------------------------- sfBm

double sfbm_b(int k, double hurst) {
  if (k < 1) throw DomainError("b(k,H) needs k >= 1");
  // b(k,H) in terms of j = 2k: (j+2)^{2H}/2 + 3 j^{2H} + (j-2)^{2H}/2 - 2(j+1)^{2H} - 2(j-1)^{2H}.
  static constexpr std::array<detail::StencilTap, 5> taps{{{2, 0.5}, {0, 3.0}, {-2, 0.5}, {1, -2.0}, {-1, -2.0}}};
  return detail::power_stencil(2.0 * hurst, 2.0 * k, taps);
}

double sfbm_b_bound_ratio(const std::vector<double>& h_grid, int k_max) {
  double worst = 0.0;
  for (double h : h_grid) {
    const double scale = c_gamma(h);
    for (int k = 3; k <= k_max; ++k) {
      const double bound = 3.0 * std::pow(static_cast<double>(k), 2.0 * h - 4.0);
      worst = std::max(worst, std::fabs(sfbm_b(k, h)) / scale / bound);
    }
  }
  return worst;
}

SfbmDiagonalExtremes sfbm_diagonal_extremes(const std::vector<double>& h_grid) {
  SfbmDiagonalExtremes out;
  out.d11_max = -std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    const double r = sfbm_b(1, h) / c_gamma(h);
    out.d11_max = std::max(out.d11_max, 1.0 - r);
    out.b1_ratio_max = std::max(out.b1_ratio_max, std::fabs(r));
  }
  return out;
}

double rho_tilde3_ratio(double hurst) {
  return std::fabs(rho_tilde(hurst, 3)) / (std::exp2(hurst) * c_gamma(hurst));
}

double rho_tilde3_bound(const std::vector<double>& h_grid) {
  double worst = 0.0;
  for (double h : h_grid) worst = std::max(worst, rho_tilde3_ratio(h));
  return worst;
}

TailBoundScan tail_bound_scan(const std::vector<double>& gamma_grid, int j_max) {
  TailBoundScan out;
  for (double g : gamma_grid) {
    const double scale = c_gamma(g);
    for (int j = 3; j <= j_max; ++j) {
      const double envelope = std::pow(static_cast<double>(j), 2.0 * g - 4.0);
      out.rho_hat_ratio = std::max(out.rho_hat_ratio, std::fabs(rho_hat(g, j)) / scale / (9.0 * envelope));
      if (j >= 4) {
        const double t = std::max(std::fabs(rho_tilde(g, j)), std::fabs(rho_tilde(g, -j)));
        out.rho_tilde_ratio = std::max(out.rho_tilde_ratio, t / scale / (26.0 * envelope));
      }
    }
  }
  return out;
}

double sfbm_difference_identity_error(double hurst, int samples, std::uint64_t seed) {
  const auto s_model = CovarianceModel::sfbm(hurst);
  const auto b_model = CovarianceModel::fbm(hurst);
  auto increment_cov = [](const CovarianceModel& m, double u, double v, double s, double t) {
    return m.cov(v, t) - m.cov(v, s) - m.cov(u, t) + m.cov(u, s);
  };
  const double p = 2.0 * hurst;
  StreamRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    std::array<double, 4> pts{rng.uniform_open(), rng.uniform_open(), rng.uniform_open(), rng.uniform_open()};
    std::sort(pts.begin(), pts.end());
    const auto [u, v, s, t] = pts;
    const double lhs = increment_cov(s_model, u, v, s, t) - increment_cov(b_model, u, v, s, t);
    const double rhs = 0.5 * (pow_abs(t + u, p) - pow_abs(t + v, p) + pow_abs(s + v, p) - pow_abs(s + u, p));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

SfbmIdentityErrors sfbm_coefficient_identity_errors(double hurst, int n) {
  const SecondMoments ms(CovarianceModel::sfbm(hurst), n, NormalizationMode::Orey);
  const SecondMoments mb(CovarianceModel::fbm(hurst), n, NormalizationMode::Orey);
  const double scale = c_gamma(hurst);
  SfbmIdentityErrors out;
  for (int level = 1; level <= 2; ++level) {
    const int count = level * n - 1;
    for (int k = 1; k <= count; ++k) {
      const double diag_expected = 1.0 - sfbm_b(k, hurst) / scale;
      out.diagonal = std::max(out.diagonal, std::fabs(ms.d(level, k, k) - diag_expected));
      for (int j = 1; j <= count; ++j) {
        if (j == k) continue;
        const double diff = ms.d(level, k, j) - mb.d(level, k, j);
        out.off_diagonal = std::max(out.off_diagonal, std::fabs(diff - rho_hat(hurst, j + k) / scale));
      }
    }
  }
  const double cross_scale = std::exp2(hurst) * scale;
  for (int j = 1; j < n; ++j) {
    for (int k = 1; k < 2 * n; ++k) {
      const double diff = ms.c(j, k) - mb.c(j, k);
      out.cross = std::max(out.cross, std::fabs(diff - rho_tilde(hurst, 2 * j + k) / cross_scale));
    }
  }
  return out;
}

// ---------------------------------------------------------------- Begyn 3(e)

double begyn_ratio(const CovarianceModel& model, double gamma, double t, double h) {
  if (!(h > 0.0) || t - h < 0.0 || t + 2.0 * h > model.horizon() * (1.0 + 1e-12)) {
    throw DomainError("Begyn stencil needs 0 <= t - h and t + 2h <= T");
  }
  const long double lt = t, lh = h;
  const std::array<long double, 3> left{lt + 2 * lh, lt + lh, lt};
  const std::array<long double, 3> right{lt + lh, lt, lt - lh};
  constexpr std::array<long double, 3> w{1.0L, -2.0L, 1.0L};
  long double sum = 0.0L;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) sum += w[a] * w[b] * model.cov_extended(left[a], right[b]);
  }
  return static_cast<double>(sum / pow_ld(lh, 2.0L * gamma));
}

double begyn_candidate_limit(double gamma, double kappa) { return kappa * kappa * rho_hat(gamma, 1); }

double sfbm_grid_aligned_residual(double hurst, int m) {
  const long double p = 2.0L * hurst;
  const long double lm = m;
  const long double two = std::exp2(p + 1.0L);
  return static_cast<double>(two * pow_ld(lm, p) - 0.5L * pow_ld(2 * lm - 1, p) - 3.0L * pow_ld(2 * lm + 1, p) +
                             two * pow_ld(lm + 1, p) - 0.5L * pow_ld(2 * lm + 3, p));
}

double sfbm_grid_aligned_residual_published(double hurst, int m) {
  const double p = 2.0 * hurst;
  return pow_abs(m, p) *
         (std::exp2(p + 1.0) - 0.5 - std::pow(3.0, p + 1.0) + std::exp2(p + 2.0) - 0.5 * std::pow(5.0, p));
}

std::vector<double> default_begyn_h_sequence() {
  std::vector<double> out;
  for (int k = 3; k <= 14; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<double> default_begyn_t_grid() { return {0.17, 0.37, 0.61, 0.83}; }

std::vector<int> default_begyn_m_grid() { return {1, 2, 3, 5}; }

BegynReport begyn_3e(const CovarianceModel& model, double gamma, const std::vector<double>& t_grid,
                     const std::vector<double>& h_sequence, const std::vector<int>& m_grid) {
  for (std::size_t i = 1; i < h_sequence.size(); ++i) {
    if (!(h_sequence[i] < h_sequence[i - 1])) throw DomainError("h sequence must be strictly decreasing");
  }
  for (double t : t_grid) {
    if (!(t > 0.0 && t < model.horizon())) throw DomainError("fixed t must lie inside (0, T)");
  }
  const double kappa = model.has_metadata() ? model.orey_metadata().kappa : 1.0;
  BegynReport out;
  out.gamma = gamma;
  out.candidate_limit = begyn_candidate_limit(gamma, kappa);

  for (double t : t_grid) {
    BegynTrack track;
    track.t = t;
    int skipped = 0;
    for (double h : h_sequence) {
      if (t - h <= 0.0 || t + 2.0 * h > model.horizon()) {
        ++skipped;
        continue;
      }
      const double d = begyn_ratio(model, gamma, t, h);
      track.h.push_back(h);
      track.ratio.push_back(d);
      track.residual.push_back(d - out.candidate_limit);
    }
    if (skipped > 0) track.note = std::to_string(skipped) + " h values skipped (t - h <= 0 or t + 2h > T)";
    // Rate from the asymptotic regime 3h < 2t, above the rounding floor.
    std::vector<double> hs, rs;
    for (std::size_t i = 0; i < track.h.size(); ++i) {
      if (3.0 * track.h[i] < t && std::fabs(track.residual[i]) > 1e-12) {
        hs.push_back(track.h[i]);
        rs.push_back(std::fabs(track.residual[i]));
      }
    }
    track.rate = log_log_slope(hs, rs);
    out.fixed_tracks.push_back(std::move(track));
  }

  for (int m : m_grid) {
    if (m < 1) throw DomainError("grid-aligned multiplier m must be >= 1");
    BegynTrack track;
    track.m = m;
    for (double h : h_sequence) {
      if ((m + 2) * h > model.horizon()) continue;
      const double d = begyn_ratio(model, gamma, m * h, h);
      track.h.push_back(h);
      track.ratio.push_back(d);
      track.residual.push_back(d - out.candidate_limit);
    }
    if (model.kind() == ModelKind::Sfbm) {
      track.expected_residual = sfbm_grid_aligned_residual(model.hurst(), m);
      track.published_residual = sfbm_grid_aligned_residual_published(model.hurst(), m);
    }
    track.rate = std::numeric_limits<double>::quiet_NaN();
    out.aligned_tracks.push_back(std::move(track));
  }
  return out;
}

double bifbm_grid_aligned_limit(double hurst, double k) {
  const long double p = 2.0L * hurst, lk = k;
  const long double a3 = pow_ld(3.0L, p), a2 = pow_ld(2.0L, p);
  const long double two_k1 = std::exp2(lk + 1.0L);
  const long double v = pow_ld(a3 + a2, lk) - 2.0L * pow_ld(a3 + 1.0L, lk) + pow_ld(3.0L, p * lk) -
                        two_k1 * pow_ld(2.0L, p * lk) + 5.0L * pow_ld(a2 + 1.0L, lk) -
                        2.0L * pow_ld(2.0L, p * lk) - two_k1 + 1.0L;
  return static_cast<double>(std::exp2(-lk) * v);
}

double bifbm_grid_aligned_limit_published(double hurst, double k) {
  const long double p = 2.0L * hurst, lk = k;
  const long double a3 = pow_ld(3.0L, p), a2 = pow_ld(2.0L, p);
  const long double two_k = std::exp2(lk);
  const long double v = pow_ld(a3 + a2, lk) - 2.0L * pow_ld(a3 + 1.0L, lk) - (two_k + 1.0L) * pow_ld(2.0L, p * lk) +
                        (std::exp2(1.0L - lk) + 3.0L) * pow_ld(a2 + 1.0L, lk) - (two_k + 1.0L) +
                        pow_ld(3.0L, p * lk) - 2.0L * pow_ld(2.0L, p * lk) + 1.0L;
  return static_cast<double>(std::exp2(-lk) * v);
}

BifbmBegyn begyn_3e_bifbm(double hurst, double k, const std::vector<double>& h_sequence) {
  const auto model = CovarianceModel::bifbm(hurst, k);
  const auto meta = model.orey_metadata();
  const double limit = begyn_candidate_limit(meta.gamma, meta.kappa);
  BifbmBegyn out;
  out.hurst = hurst;
  out.k = k;
  for (double h : h_sequence) {
    if (3.0 * h > model.horizon()) continue;
    out.h.push_back(h);
    out.direct.push_back(begyn_ratio(model, meta.gamma, h, h) - limit);
  }
  out.closed_form = bifbm_grid_aligned_limit(hurst, k);
  out.published = bifbm_grid_aligned_limit_published(hurst, k);
  return out;
}

// ---------------------------------------------------------------- report

Verdict ConditionReport::overall() const {
  Verdict v = Verdict::Pass;
  if (row_sums) v = combine(v, row_sums->verdict);
  if (scaled_cov) v = combine(v, scaled_cov->verdict);
  if (fbm_gap) v = combine(v, fbm_gap->verdict);
  if (bias) v = combine(v, bias->verdict);
  return v;
}

ConditionReport verify(const CovarianceModel& model, const VerifyOptions& options) {
  if (options.n_min < 4 || options.n_max < options.n_min) throw DomainError("invalid n range for verify");
  const auto meta = model.orey_metadata();
  ConditionReport report;
  report.model = model.spec();
  for (int n = options.n_min; n <= options.n_max; n *= 2) report.n_grid.push_back(n);

  if (options.row_sums || options.scaled_cov) {
    const auto aggs = aggregates_over(model, report.n_grid, NormalizationMode::Orey, options.threads);
    if (options.row_sums) report.row_sums = row_sums_from(report.n_grid, aggs);
    if (options.scaled_cov) report.scaled_cov = scaled_cov_from(model, report.n_grid, aggs);
  }
  if (options.fbm_gap) report.fbm_gap = check_fbm_gap(model, report.n_grid, options.threads);
  if (options.bias) report.bias = check_bias(model, report.n_grid);
  if (options.begyn) {
    const double T = model.horizon();
    auto ts = default_begyn_t_grid();
    auto hs = default_begyn_h_sequence();
    for (auto& t : ts) t *= T;
    for (auto& h : hs) h *= T;
    report.begyn = begyn_3e(model, meta.gamma, ts, hs);
  }
  return report;
}

}  // namespace orey
