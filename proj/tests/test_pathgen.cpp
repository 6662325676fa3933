#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "orey/errors.hpp"
#include "orey/pathgen.hpp"
#include "orey/quadvar.hpp"

using namespace orey;

namespace {

struct Moments {
  double mean = 0, var = 0, se_var = 0;
};

Moments moments(const std::vector<double>& x) {
  const double m = static_cast<double>(x.size());
  Moments r;
  for (double v : x) r.mean += v;
  r.mean /= m;
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - r.mean) * (v - r.mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= m;
  m4 /= m;
  r.var = m2 * m / (m - 1);
  r.se_var = std::sqrt((m4 - m2 * m2) / m);
  return r;
}

// Largest |z| of the empirical Gram matrix of values[1..n] against the kernel.
double worst_gram_z(const PathSampler& s, const CovarianceModel& model, int reps, std::uint64_t seed) {
  const int n = s.grid_count();
  std::vector<double> acc(n * n, 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto p = s.sample(seed, r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc[i * n + j] += p.values[i + 1] * p.values[j + 1];
  }
  double worst = 0.0;
  const double T = model.horizon();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double kij = model.cov(T * (i + 1) / n, T * (j + 1) / n);
      const double kii = model.cov(T * (i + 1) / n, T * (i + 1) / n);
      const double kjj = model.cov(T * (j + 1) / n, T * (j + 1) / n);
      const double se = std::sqrt((kii * kjj + kij * kij) / reps);
      worst = std::max(worst, std::fabs(acc[i * n + j] / reps - kij) / se);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("path shape and determinism") {
  for (const auto& m : {CovarianceModel::fbm(0.7), CovarianceModel::sfbm(0.3), CovarianceModel::bifbm(0.6, 0.5)}) {
    const auto a = simulate(m, 64, 42);
    const auto b = simulate(m, 64, 42);
    const auto c = simulate(m, 64, 43);
    CHECK(a.values.size() == 65);
    CHECK(a.values[0] == 0.0);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.seed == 42);
  }
  CHECK_THROWS_AS(simulate(CovarianceModel::fbm(0.5), 3, 1), DomainError);
}

TEST_CASE("make_sampler picks the fast path") {
  CHECK(make_sampler(CovarianceModel::fbm(0.7), 16)->generator() == Generator::CirculantFbm);
  CHECK(make_sampler(CovarianceModel::sfbm(0.7), 16)->generator() == Generator::SfbmReflection);
  CHECK(make_sampler(CovarianceModel::bifbm(0.6, 0.5), 16)->generator() == Generator::Cholesky);
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) CHECK(sfbm_reflection_self_check(h));
  CHECK(sfbm_reflection_self_check(0.7, 3.0));
}

TEST_CASE("Cholesky terminal variance matches cov(T,T)") {
  for (const auto& m : {CovarianceModel::sfbm(0.7, 2.0), CovarianceModel::bifbm(0.6, 0.5)}) {
    CholeskySampler s(m, 32);
    std::vector<double> xt;
    for (int r = 0; r < 10000; ++r) xt.push_back(s.sample(5, r).values.back());
    const auto mo = moments(xt);
    const double target = m.cov(m.horizon(), m.horizon());
    CHECK(std::fabs(mo.var - target) < 4 * mo.se_var);
  }
}

TEST_CASE("Brownian increments through Cholesky are iid N(0, T/n)") {
  const auto m = CovarianceModel::fbm(0.5, 2.0);
  CholeskySampler s(m, 16);
  std::vector<double> inc;
  for (int r = 0; r < 10000; ++r) {
    const auto p = s.sample(8, r);
    inc.push_back(p.values[8] - p.values[7]);
  }
  const auto mo = moments(inc);
  CHECK(std::fabs(mo.var - 2.0 / 16) < 4 * mo.se_var);
}

TEST_CASE("circulant fbm: Brownian case has uncorrelated increments") {
  CirculantFbmSampler s(0.5, 64, 1.0);
  double prod = 0, sq = 0;
  std::vector<double> lag;
  for (int r = 0; r < 10000; ++r) {
    const auto inc = s.sample_increments(3, r);
    lag.push_back(inc[10] * inc[11]);
    sq += inc[10] * inc[10];
    prod += inc[10] * inc[11];
  }
  const auto mo = moments(lag);
  CHECK(std::fabs(mo.mean) < 4 * std::sqrt(mo.var / lag.size()));
  CHECK(std::fabs(sq / 10000 - 1.0 / 64) < 4 * std::sqrt(2.0 / 10000) / 64);
}

TEST_CASE("circulant fbm terminal variance is T^{2 gamma}") {
  CirculantFbmSampler s(0.7, 128, 2.0);
  std::vector<double> xt;
  for (int r = 0; r < 10000; ++r) xt.push_back(s.sample(17, r).values.back());
  const auto mo = moments(xt);
  CHECK(std::fabs(mo.var - std::pow(2.0, 1.4)) < 4 * mo.se_var);
}

TEST_CASE("reflection sampler covariances") {
  {
    SfbmReflectionSampler s(0.5, 16, 1.0);
    std::vector<double> prod;
    for (int r = 0; r < 10000; ++r) {
      const auto p = s.sample(21, r);
      prod.push_back(p.values[5] * p.values[12]);
      CHECK(p.values[0] == 0.0);
    }
    const auto mo = moments(prod);
    CHECK(std::fabs(mo.mean - 5.0 / 16) < 4 * std::sqrt(mo.var / prod.size()));
  }
  {
    const auto m = CovarianceModel::sfbm(0.7, 1.5);
    SfbmReflectionSampler s(0.7, 16, 1.5);
    std::vector<double> prod;
    for (int r = 0; r < 10000; ++r) {
      const auto p = s.sample(22, r);
      prod.push_back(p.values[8] * p.values[16]);
    }
    const auto mo = moments(prod);
    CHECK(std::fabs(mo.mean - m.cov(0.75, 1.5)) < 4 * std::sqrt(mo.var / prod.size()));
  }
}

TEST_CASE("empirical Gram matrices match the kernels") {
  for (double p : {0.3, 0.5, 0.7}) {
    for (const auto& m : {CovarianceModel::fbm(p), CovarianceModel::sfbm(p), CovarianceModel::bifbm(p, 0.5)}) {
      const auto fast = make_sampler(m, 16);
      CHECK(worst_gram_z(*fast, m, 5000, 100) < 5.0);
      CholeskySampler chol(m, 16);
      CHECK(worst_gram_z(chol, m, 5000, 200) < 5.0);
    }
  }
}

TEST_CASE("Cholesky and circulant agree on V statistics") {
  const auto m = CovarianceModel::fbm(0.7);
  const int reps = 4000;
  CholeskySampler chol(m, 64);
  CirculantFbmSampler circ(0.7, 64, 1.0);
  std::vector<double> vc, vf;
  for (int r = 0; r < reps; ++r) {
    vc.push_back(vstat(second_diffs(chol.sample(1, r), 2)));
    vf.push_back(vstat(second_diffs(circ.sample(2, r), 2)));
  }
  const auto a = moments(vc), b = moments(vf);
  const double se_mean = std::sqrt(a.var / reps + b.var / reps);
  CHECK(std::fabs(a.mean - b.mean) < 4 * se_mean);
  CHECK(std::fabs(a.var - b.var) < 4 * std::hypot(a.se_var, b.se_var));
}

TEST_CASE("Cholesky jitter policy") {
  // Rank one: exact singularity absorbed by jitter.
  const auto rank_one = CovarianceModel::custom([](double s, double t) { return s * t; }, 1.0);
  CholeskySampler s(rank_one, 8);
  CHECK(s.jitter() > 0.0);
  CHECK(s.jitter() <= 1e-10);
  // Indefinite: reported with the pivot.
  const auto bad = CovarianceModel::custom([](double s, double t) { return s == t ? s : 2.0 * std::min(s, t); }, 1.0);
  try {
    CholeskySampler b(bad, 8);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()).find("pivot") != std::string::npos);
  }
}

TEST_CASE("CSV round trip is bit exact") {
  const auto p = simulate(CovarianceModel::sfbm(0.7, 3.0), 127, 9);
  std::stringstream buf;
  export_path(p, buf);
  const auto q = import_path(buf);
  CHECK(q.n == p.n);
  CHECK(q.horizon == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(q.values == p.values);
  CHECK(q.generator == Generator::Imported);
}

TEST_CASE("CSV validation") {
  auto parse = [](const std::string& text) {
    std::stringstream in(text);
    return import_path(in);
  };
  const std::string good = "k,t,x\n0,0,0\n1,0.25,1\n2,0.5,2\n3,0.75,1\n4,1,0\n";
  CHECK(parse(good).n == 4);
  CHECK_THROWS_AS(parse("k,t,x\n0,0,0.1\n1,0.25,1\n2,0.5,2\n3,0.75,1\n4,1,0\n"), FormatError);
  CHECK_THROWS_AS(parse("k,t,x\n0,0,0\n2,0.5,2\n1,0.25,1\n3,0.75,1\n4,1,0\n"), FormatError);
  CHECK_THROWS_AS(parse("k,t,x\n0,0,0\n1,0.3,1\n2,0.5,2\n3,0.75,1\n4,1,0\n"), FormatError);
  CHECK_THROWS_AS(parse("a,b,c\n0,0,0\n1,0.25,1\n2,0.5,2\n3,0.75,1\n4,1,0\n"), FormatError);
  CHECK_THROWS_AS(parse("k,t,x\n0,0,0\n1,0.25,1\n"), FormatError);
  CHECK_THROWS_AS(parse("k,t,x\n0,0,0\n1,0.25,oops\n2,0.5,2\n3,0.75,1\n4,1,0\n"), FormatError);
}
