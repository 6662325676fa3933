#include "orey/quadvar.hpp"

#include <cmath>
#include <sstream>

#include "orey/errors.hpp"
#include "orey/parallel.hpp"

namespace orey {

namespace {

constexpr std::array<int, 3> kOffsets{1, 0, -1};
constexpr std::array<long double, 3> kWeights{1.0L, -2.0L, 1.0L};

void require_level(int level) {
  if (level != 1 && level != 2) throw DomainError("level multiplier must be 1 or 2");
}

// E Delta_a Delta_b on a fine grid where the two differences are centred at
// fine indices pa, pb with strides sa, sb.
long double stencil(const GridKernel& kernel, int pa, int sa, int pb, int sb) {
  long double sum = 0.0L;
  for (int u = 0; u < 3; ++u) {
    for (int v = 0; v < 3; ++v) {
      sum += kWeights[u] * kWeights[v] * kernel(pa + kOffsets[u] * sa, pb + kOffsets[v] * sb);
    }
  }
  return sum;
}

double orey_scale(const CovarianceModel& model, int intervals) {
  const auto meta = model.orey_metadata();
  return meta.kappa * std::sqrt(4.0 - std::exp2(2.0 * meta.gamma)) *
         std::pow(model.horizon() / intervals, meta.gamma);
}

}  // namespace

std::string to_string(NormalizationMode mode) {
  return mode == NormalizationMode::Orey ? "orey" : "exact";
}

NormalizationMode parse_normalization(std::string_view text) {
  if (text == "orey") return NormalizationMode::Orey;
  if (text == "exact") return NormalizationMode::ExactVariance;
  throw FormatError("unknown normalization '" + std::string(text) + "' (expected exact or orey)");
}

std::vector<double> second_diffs(const GridPath& path, int level) {
  require_level(level);
  if (static_cast<int>(path.values.size()) != path.n + 1) {
    throw DomainError("path has inconsistent length");
  }
  if (level == 1 && path.n % 2 != 0) {
    throw DomainError("level-n differences need a path with 2n + 1 points");
  }
  const int stride = level == 1 ? 2 : 1;
  const int m = path.n / stride;
  if (m < 2) throw DomainError("path too short for second differences");
  std::vector<double> out(m - 1);
  const auto& x = path.values;
  for (int k = 1; k < m; ++k) {
    out[k - 1] = x[(k + 1) * stride] - 2.0 * x[k * stride] + x[(k - 1) * stride];
  }
  return out;
}

std::vector<double> second_diffs(const GridPath& path, int level, NormalizationMode mode,
                                 const CovarianceModel& model) {
  auto out = second_diffs(path, level);
  const auto grid_model = model.with_horizon(path.horizon);
  const int stride = level == 1 ? 2 : 1;
  if (mode == NormalizationMode::Orey) {
    const double s = orey_scale(grid_model, path.n / stride);
    for (auto& v : out) v /= s;
    return out;
  }
  const GridKernel kernel(grid_model, path.n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int centre = static_cast<int>(k + 1) * stride;
    const long double var = stencil(kernel, centre, stride, centre, stride);
    if (!(var > 0.0L)) throw NumericalError("second difference has zero variance");
    out[k] /= std::sqrt(static_cast<double>(var));
  }
  return out;
}

double vstat(std::span<const double> diffs) {
  if (diffs.empty()) throw DomainError("vstat of an empty vector");
  long double sum = 0.0L;
  for (double v : diffs) sum += static_cast<long double>(v) * v;
  return static_cast<double>(sum);
}

// ---------------------------------------------------------------- SecondMoments

SecondMoments::SecondMoments(const CovarianceModel& model, int n, NormalizationMode mode)
    : kernel_(model, 2 * n), n_(n), mode_(mode) {
  if (n < 4) throw DomainError("coefficients need n >= 4");
  for (int level = 1; level <= 2; ++level) {
    auto& s = scale_[level - 1];
    s.resize(level * n);
    if (mode == NormalizationMode::Orey) {
      std::fill(s.begin(), s.end(), orey_scale(model, level * n));
      continue;
    }
    for (int k = 1; k < level * n; ++k) {
      const double var = raw(level, k, level, k);
      if (!(var > 0.0)) {
        std::ostringstream msg;
        msg << "E (Delta^2 X)^2 = " << var << " at level " << level << ", k = " << k;
        throw NumericalError(msg.str());
      }
      s[k] = std::sqrt(var);
    }
  }
}

double SecondMoments::raw(int level_j, int j, int level_k, int k) const {
  const int sj = level_j == 1 ? 2 : 1;
  const int sk = level_k == 1 ? 2 : 1;
  return static_cast<double>(stencil(kernel_, j * sj, sj, k * sk, sk));
}

double SecondMoments::scale(int level, int k) const { return scale_[level - 1][k]; }

double SecondMoments::d(int level, int j, int k) const {
  return raw(level, j, level, k) / (scale(level, j) * scale(level, k));
}

double SecondMoments::c(int j, int k) const {
  return raw(1, j, 2, k) / (scale(1, j) * scale(2, k));
}

// ---------------------------------------------------------------- Dense

CoefficientSet coefficients(const CovarianceModel& model, int n, NormalizationMode mode, int threads) {
  if (n > kMaxDenseCoefficients) {
    throw DomainError("dense coefficients limited to n <= 4096; use coefficient_aggregates");
  }
  const SecondMoments m(model, n, mode);
  CoefficientSet out;
  out.n = n;
  out.mode = mode;
  out.d_n.resize(n - 1, n - 1);
  out.d_2n.resize(2 * n - 1, 2 * n - 1);
  out.c.resize(n - 1, 2 * n - 1);

  parallel_for(static_cast<std::size_t>(2 * n - 1), threads, [&](std::size_t row) {
    const int j = static_cast<int>(row) + 1;
    for (int k = 1; k <= j; ++k) {
      const double v = m.d(2, j, k);
      out.d_2n(j - 1, k - 1) = v;
      out.d_2n(k - 1, j - 1) = v;
    }
    if (j < n) {
      for (int k = 1; k <= j; ++k) {
        const double v = m.d(1, j, k);
        out.d_n(j - 1, k - 1) = v;
        out.d_n(k - 1, j - 1) = v;
      }
      for (int k = 1; k < 2 * n; ++k) out.c(j - 1, k - 1) = m.c(j, k);
    }
  });
  return out;
}

// ---------------------------------------------------------------- Aggregates

CoefficientAggregates coefficient_aggregates(const SecondMoments& m, int threads) {
  const int n = m.n();
  struct RowStats {
    double abs_sum = 0.0;
    long double diag_sq = 0.0L;
    long double upper_sq = 0.0L;  // k > j
    long double diag = 0.0L;
  };
  std::array<std::vector<RowStats>, 2> rows{std::vector<RowStats>(n - 1),
                                            std::vector<RowStats>(2 * n - 1)};
  std::vector<long double> cross(n - 1, 0.0L);

  parallel_for(static_cast<std::size_t>(3 * n - 2), threads, [&](std::size_t task) {
    const int level = task < static_cast<std::size_t>(n - 1) ? 1 : 2;
    const int j = level == 1 ? static_cast<int>(task) + 1 : static_cast<int>(task) - (n - 1) + 1;
    const int count = m.count(level);
    RowStats s;
    for (int k = 1; k <= count; ++k) {
      const double v = m.d(level, j, k);
      s.abs_sum += std::fabs(v);
      if (k == j) {
        s.diag = v;
        s.diag_sq = static_cast<long double>(v) * v;
      } else if (k > j) {
        s.upper_sq += static_cast<long double>(v) * v;
      }
    }
    rows[level - 1][j - 1] = s;
    if (level == 1) {
      long double acc = 0.0L;
      for (int k = 1; k < 2 * n; ++k) {
        const long double v = m.c(j, k);
        acc += v * v;
      }
      cross[j - 1] = acc;
    }
  });

  CoefficientAggregates out;
  out.n = n;
  out.mode = m.mode();
  for (int level = 1; level <= 2; ++level) {
    double row_max = 0.0;
    long double diag = 0.0L, diag_sq = 0.0L, upper_sq = 0.0L;
    for (const auto& s : rows[level - 1]) {
      row_max = std::max(row_max, s.abs_sum);
      diag += s.diag;
      diag_sq += s.diag_sq;
      upper_sq += s.upper_sq;
    }
    out.row_sum_max[level - 1] = row_max;
    out.expected_v[level - 1] = static_cast<double>(diag);
    out.var_v[level - 1] = static_cast<double>(2.0L * diag_sq + 4.0L * upper_sq);
  }
  long double cov = 0.0L;
  for (auto v : cross) cov += v;
  out.cov_v = static_cast<double>(2.0L * cov);
  return out;
}

CoefficientAggregates coefficient_aggregates(const CovarianceModel& model, int n,
                                             NormalizationMode mode, int threads) {
  return coefficient_aggregates(SecondMoments(model, n, mode), threads);
}

double isserlis_var(const Eigen::MatrixXd& d) {
  long double diag = 0.0L, off = 0.0L;
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    diag += static_cast<long double>(d(k, k)) * d(k, k);
    for (Eigen::Index m = k + 1; m < d.cols(); ++m) off += static_cast<long double>(d(k, m)) * d(k, m);
  }
  return static_cast<double>(2.0L * diag + 4.0L * off);
}

double isserlis_cov(const Eigen::MatrixXd& c) {
  long double sum = 0.0L;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) sum += static_cast<long double>(c(j, k)) * c(j, k);
  }
  return static_cast<double>(2.0L * sum);
}

double scaled_cov(const CoefficientAggregates& agg, int i, int j) {
  require_level(i);
  require_level(j);
  const double n = agg.n;
  const double cov = i == j ? agg.var_v[i - 1] : agg.cov_v;
  // n * cov(V_in / (i n), V_jn / (j n)) = cov / (i j n)
  return cov / (i * j * n);
}

double scaled_cov(const CovarianceModel& model, int n, int i, int j, NormalizationMode mode,
                  int threads) {
  return scaled_cov(coefficient_aggregates(model, n, mode, threads), i, j);
}

}  // namespace orey
