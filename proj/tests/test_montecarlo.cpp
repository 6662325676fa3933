#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orey/errors.hpp"
#include "orey/montecarlo.hpp"

using namespace orey;

TEST_CASE("Kolmogorov distribution tail") {
  // Reference values of the limiting Kolmogorov survival function.
  const std::pair<double, double> ref[] = {{0.3, 0.9999906941986655}, {0.5, 0.9639452436648751},
                                           {0.8, 0.5441424115741981}, {1.0, 0.26999967167735456},
                                           {1.36, 0.049485876755377876}, {2.0, 0.0006709252557796953}};
  const std::size_t n = 400;
  const double stretch = std::sqrt(400.0) + 0.12 + 0.11 / std::sqrt(400.0);
  for (auto [lambda, p] : ref) CHECK(std::fabs(ks_pvalue(lambda / stretch, n) - p) < 1e-12);
  CHECK(ks_pvalue(0.0, 10) == 1.0);
}

TEST_CASE("KS distance") {
  CHECK(ks_distance({-1.5, -0.3, 0.1, 0.4, 2.2}) == doctest::Approx(0.18609655248650137).epsilon(1e-12));
  CHECK_THROWS_AS(ks_normality({1.0, 1.0, 1.0}), DegenerateInputError);
}

TEST_CASE("determinism across seeds and thread counts") {
  McConfig c{.model = CovarianceModel::sfbm(0.7), .n = 64, .reps = 150, .seed = 42};
  const auto a = run(c);
  c.threads = 4;
  const auto b = run(c);
  CHECK(a.samples == b.samples);
  CHECK(a.cov == b.cov);
  c.seed = 43;
  const auto d = run(c);
  CHECK(d.samples != a.samples);
  c.seed = 1;
  const auto s1 = run(c);
  c.seed = 2;
  const auto s2 = run(c);
  CHECK(s1.cov != s2.cov);

  McConfig g{.model = CovarianceModel::sfbm(0.3), .n = 64, .reps = 120, .seed = 7,
             .statistic = McStatistic::GammaHat, .threads = 1};
  const auto ga = run(g);
  g.threads = 8;
  const auto gb = run(g);
  CHECK(ga.gamma_hats == gb.gamma_hats);
  CHECK(ga.ci_coverage == gb.ci_coverage);
}

TEST_CASE("few replications give no normality verdict") {
  McConfig c{.model = CovarianceModel::fbm(0.5), .n = 16, .reps = 50, .seed = 3};
  const auto r = run(c);
  CHECK(r.normality_verdict == Verdict::Inconclusive);
  for (const auto& k : r.ks) CHECK(k.verdict == Verdict::Inconclusive);
}

TEST_CASE("Brownian bivariate covariance") {
  McConfig c{.model = CovarianceModel::fbm(0.5), .n = 1024, .reps = 500, .seed = 42};
  const auto r = run_bivariate(c);
  const double target[2][2] = {{3, 0.75}, {0.75, 1.5}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(r.target[a][b] == doctest::Approx(target[a][b]).epsilon(1e-12));
      CHECK(std::fabs(r.cov[a][b] / target[a][b] - 1) <= 0.15);
    }
  CHECK(r.cov[0][1] == r.cov[1][0]);
  CHECK(r.cov[0][0] * r.cov[1][1] >= r.cov[0][1] * r.cov[0][1]);
  for (int a = 0; a < 2; ++a) CHECK(std::fabs(r.mean[a]) < 4 * r.mean_se[a]);
}

TEST_CASE("sfBm bivariate marginals look normal") {
  McConfig c{.model = CovarianceModel::sfbm(0.7), .n = 1024, .reps = 500, .seed = 42};
  const auto r = run_bivariate(c);
  for (const auto& k : r.ks) CHECK(k.p_value > 0.01);
}

TEST_CASE("estimator variance and consistency") {
  McConfig c{.model = CovarianceModel::sfbm(0.3), .n = 1024, .reps = 500, .seed = 42,
             .statistic = McStatistic::GammaHat};
  const auto r = run_gamma_hat(c);
  CHECK(std::fabs(r.cov[0][0] / r.target[0][0] - 1) <= 0.15);
  CHECK(std::fabs(r.gamma_hat_mean - 0.3) <= 3 * r.gamma_hat_se);
  REQUIRE(r.ci_coverage.has_value());
}

TEST_CASE("estimator bias shrinks as n grows") {
  // The O(1/n) bias is far below the Monte Carlo error at n = 1024 with
  // desk-scale M, so the decay is resolved on a coarser pair of grids.
  McConfig c{.model = CovarianceModel::sfbm(0.7), .n = 32, .reps = 20000, .seed = 5,
             .statistic = McStatistic::GammaHat, .ci_level = std::nullopt};
  const auto small = run_gamma_hat(c);
  c.n = 128;
  const auto large = run_gamma_hat(c);
  const double b_small = small.gamma_hat_mean - 0.7, b_large = large.gamma_hat_mean - 0.7;
  CHECK(std::fabs(b_large) < std::fabs(b_small));
  CHECK(std::fabs(b_small) - std::fabs(b_large) > 3 * std::hypot(small.gamma_hat_se, large.gamma_hat_se));
}

TEST_CASE("configuration errors") {
  const auto custom = CovarianceModel::custom([](double s, double t) { return std::min(s, t); }, 1.0);
  McConfig c{.model = custom, .n = 16, .reps = 10, .seed = 1};
  CHECK_THROWS_AS(run(c), MissingMetadataError);
  McConfig d{.model = CovarianceModel::fbm(0.5), .n = 2, .reps = 10, .seed = 1};
  CHECK_THROWS_AS(run(d), DomainError);
  CHECK(parse_statistic("gamma_hat") == McStatistic::GammaHat);
  CHECK_THROWS_AS(parse_statistic("mean"), FormatError);
}
