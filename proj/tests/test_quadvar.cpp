#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "orey/asymptotics.hpp"
#include "orey/errors.hpp"
#include "orey/pathgen.hpp"
#include "orey/quadvar.hpp"
#include "wick_oracle.hpp"

using namespace orey;

namespace {

GridPath make_path(std::vector<double> v, double T = 1.0) {
  GridPath p;
  p.horizon = T;
  p.n = static_cast<int>(v.size()) - 1;
  p.values = std::move(v);
  return p;
}

// E (X_b - X_a)(X_d - X_c) from incremental variances only.
double increment_cov(const CovarianceModel& m, double a, double b, double c, double d) {
  auto s2 = [&](double x, double y) { return x <= y ? m.incremental_variance(x, y) : m.incremental_variance(y, x); };
  return 0.5 * (s2(a, d) + s2(b, c) - s2(a, c) - s2(b, d));
}

}  // namespace

TEST_CASE("second differences on small paths") {
  const auto lin = make_path({0, 3, 6, 9, 12, 15, 18, 21, 24});
  for (double v : second_diffs(lin, 2)) CHECK(v == 0.0);
  for (double v : second_diffs(lin, 1)) CHECK(v == 0.0);
  const auto bump = make_path({0, 0, 1, 0, 0});
  CHECK(second_diffs(bump, 2) == std::vector<double>{1, -2, 1});
  CHECK(second_diffs(bump, 1) == std::vector<double>{-2});
  CHECK(vstat(std::vector<double>{1, -2, 1}) == 6.0);
  CHECK(vstat(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(vstat(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(second_diffs(make_path({0, 1, 2, 3, 4, 5}), 1), DomainError);
}

TEST_CASE("Orey normalization needs metadata") {
  const auto custom = CovarianceModel::custom([](double s, double t) { return std::min(s, t); }, 1.0);
  CHECK_THROWS_AS(SecondMoments(custom, 8, NormalizationMode::Orey), MissingMetadataError);
  CHECK_NOTHROW(SecondMoments(custom, 8, NormalizationMode::ExactVariance));
  CHECK_THROWS_AS(second_diffs(make_path({0, 0, 1, 0, 0}), 2, NormalizationMode::Orey, custom), MissingMetadataError);
  CHECK(parse_normalization("exact") == NormalizationMode::ExactVariance);
  CHECK(parse_normalization("orey") == NormalizationMode::Orey);
  CHECK_THROWS_AS(parse_normalization("other"), FormatError);
}

TEST_CASE("fBm under Orey normalization: unit diagonal and rho_hat off-diagonals") {
  for (double g : {0.2, 0.5, 0.7, 0.9}) {
    const auto set = coefficients(CovarianceModel::fbm(g, 2.5), 16, NormalizationMode::Orey);
    const double c = 4 - std::exp2(2 * g);
    for (int level = 1; level <= 2; ++level) {
      const auto& d = set.d(level);
      for (int k = 0; k < d.rows(); ++k) {
        CHECK(std::fabs(d(k, k) - 1.0) < 1e-12);
        for (int j = k + 1; j < d.rows(); ++j) CHECK(std::fabs(d(k, j) - rho_hat(g, j - k) / c) < 1e-12);
      }
    }
  }
}

TEST_CASE("stencil identity against incremental-variance polarization") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = u(gen);
    const int which = trial % 3;
    const auto m = which == 0   ? CovarianceModel::fbm(p, 1.7)
                   : which == 1 ? CovarianceModel::sfbm(p, 1.7)
                                : CovarianceModel::bifbm(p, u(gen), 1.7);
    const int n = 8;
    const SecondMoments sm(m, n, NormalizationMode::ExactVariance);
    const double h = m.horizon() / (2 * n);
    auto delta_cov = [&](int la, int a, int lb, int b) {
      double acc = 0.0;
      const int sa = la == 1 ? 2 : 1, sb = lb == 1 ? 2 : 1;
      // Delta^2 = (X_{k+1} - X_k) - (X_k - X_{k-1}).
      const double xa[2][2] = {{h * sa * a, h * sa * (a + 1)}, {h * sa * (a - 1), h * sa * a}};
      const double xb[2][2] = {{h * sb * b, h * sb * (b + 1)}, {h * sb * (b - 1), h * sb * b}};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          acc += (i == j ? 1.0 : -1.0) * increment_cov(m, xa[i][0], xa[i][1], xb[j][0], xb[j][1]);
      return acc;
    };
    for (int la = 1; la <= 2; ++la)
      for (int lb = 1; lb <= 2; ++lb)
        for (int a = 1; a < la * n; ++a)
          for (int b = 1; b < lb * n; ++b) CHECK(std::fabs(sm.raw(la, a, lb, b) - delta_cov(la, a, lb, b)) < 1e-11);
  }
}

TEST_CASE("exact-variance normalization and Cauchy-Schwarz") {
  for (const auto& m : {CovarianceModel::sfbm(0.3), CovarianceModel::bifbm(0.6, 0.5), CovarianceModel::fbm(0.8)}) {
    for (auto mode : {NormalizationMode::ExactVariance, NormalizationMode::Orey}) {
      const auto set = coefficients(m, 12, mode);
      for (int level = 1; level <= 2; ++level) {
        const auto& d = set.d(level);
        CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (int j = 0; j < d.rows(); ++j) {
          if (mode == NormalizationMode::ExactVariance) CHECK(std::fabs(d(j, j) - 1.0) < 1e-14);
          for (int k = 0; k < d.cols(); ++k) CHECK(std::fabs(d(j, k)) <= std::sqrt(d(j, j) * d(k, k)) * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("Brownian motion, n = 8: Var V = 20") {
  const auto set = coefficients(CovarianceModel::fbm(0.5), 8, NormalizationMode::ExactVariance);
  CHECK(std::fabs(isserlis_var(set.d_n) - 20.0) < 1e-12);
  double brute = 0.0;
  for (int j = 0; j < 7; ++j)
    for (int k = 0; k < 7; ++k) brute += 2 * set.d_n(j, k) * set.d_n(j, k);
  CHECK(std::fabs(brute - 20.0) < 1e-12);
  CHECK(isserlis_var(Eigen::MatrixXd::Identity(5, 5)) == 10.0);
  CHECK(isserlis_cov(Eigen::MatrixXd::Zero(3, 7)) == 0.0);
  CHECK(isserlis_cov(set.c) >= 0.0);
}

TEST_CASE("Isserlis identities against brute-force Wick expansion") {
  for (const auto& m : {CovarianceModel::fbm(0.3), CovarianceModel::fbm(0.7), CovarianceModel::sfbm(0.3),
                        CovarianceModel::sfbm(0.7), CovarianceModel::bifbm(0.6, 0.5)}) {
    for (auto mode : {NormalizationMode::Orey, NormalizationMode::ExactVariance}) {
      const auto set = coefficients(m, 6, mode);
      const auto brute = testing::wick_bruteforce(m, 6, mode);
      CHECK(std::fabs(isserlis_var(set.d_n) - brute.var[0]) < 1e-10);
      CHECK(std::fabs(isserlis_var(set.d_2n) - brute.var[1]) < 1e-10);
      CHECK(std::fabs(isserlis_cov(set.c) - brute.cov) < 1e-10);
    }
  }
}

TEST_CASE("aggregates match the dense matrices and ignore thread count") {
  const auto m = CovarianceModel::sfbm(0.7, 2.0);
  const auto set = coefficients(m, 40, NormalizationMode::Orey);
  const auto a1 = coefficient_aggregates(m, 40, NormalizationMode::Orey, 1);
  const auto a3 = coefficient_aggregates(m, 40, NormalizationMode::Orey, 3);
  CHECK(a1.var_v == a3.var_v);
  CHECK(a1.cov_v == a3.cov_v);
  CHECK(a1.row_sum_max == a3.row_sum_max);
  CHECK(a1.var_v[0] == doctest::Approx(isserlis_var(set.d_n)).epsilon(1e-12));
  CHECK(a1.var_v[1] == doctest::Approx(isserlis_var(set.d_2n)).epsilon(1e-12));
  CHECK(a1.cov_v == doctest::Approx(isserlis_cov(set.c)).epsilon(1e-12));
  CHECK(a1.expected_v[0] == doctest::Approx(set.d_n.trace()).epsilon(1e-12));
  CHECK(a1.row_sum_max[1] == doctest::Approx(set.d_2n.cwiseAbs().rowwise().sum().maxCoeff()).epsilon(1e-12));
  const auto t3 = coefficients(m, 40, NormalizationMode::Orey, 3);
  CHECK(t3.c == set.c);
  CHECK_THROWS_AS(coefficients(m, 4097, NormalizationMode::Orey), DomainError);
  CHECK_THROWS_AS(coefficients(m, 3, NormalizationMode::Orey), DomainError);
}

TEST_CASE("fBm exact-variance mean is in - 1") {
  const auto a = coefficient_aggregates(CovarianceModel::fbm(0.7), 32, NormalizationMode::ExactVariance);
  CHECK(a.expected_v[0] == doctest::Approx(31).epsilon(1e-13));
  CHECK(a.expected_v[1] == doctest::Approx(63).epsilon(1e-13));
}

TEST_CASE("Monte Carlo mean of standardized V is in - 1") {
  const auto m = CovarianceModel::fbm(0.7);
  const auto s = make_sampler(m, 64);
  const int reps = 10000;
  double sum = 0, sq = 0;
  for (int r = 0; r < reps; ++r) {
    const double v = vstat(second_diffs(s->sample(31, r), 2, NormalizationMode::Orey, m));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sq / reps - mean * mean) / reps);
  CHECK(std::fabs(mean - 63.0) < 4 * se);
}

TEST_CASE("scaled covariance symmetry and convergence to Sigma") {
  const auto m = CovarianceModel::fbm(0.5);
  const auto a = coefficient_aggregates(m, 64, NormalizationMode::Orey);
  CHECK(scaled_cov(a, 1, 2) == scaled_cov(a, 2, 1));
  CHECK(scaled_cov(a, 1, 1) == doctest::Approx(64.0 * a.var_v[0] / (64.0 * 64.0)).epsilon(1e-14));
  CHECK(scaled_cov(m, 64, 1, 1) == scaled_cov(a, 1, 1));
  for (double g : {0.3, 0.7}) {
    const auto target = sigma_matrix(g);
    const auto model = CovarianceModel::fbm(g);
    const double t[3] = {target.sigma11, target.sigma12, target.sigma22};
    double prev[3] = {1e300, 1e300, 1e300};
    for (int n = 32; n <= 2048; n *= 2) {
      const auto agg = coefficient_aggregates(model, n, NormalizationMode::Orey);
      const double v[3] = {scaled_cov(agg, 1, 1), scaled_cov(agg, 1, 2), scaled_cov(agg, 2, 2)};
      for (int e = 0; e < 3; ++e) {
        const double gap = std::fabs(v[e] - t[e]);
        CHECK(gap <= prev[e]);
        prev[e] = gap;
      }
    }
    for (double p : prev) CHECK(p < 0.02);
  }
}
