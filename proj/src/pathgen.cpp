#include "orey/pathgen.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <mutex>
#include <sstream>

#include "orey/errors.hpp"
#include "orey/rng.hpp"

namespace orey {

double StreamRng::normal() {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, uniform_open());
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::Cholesky:
      return "cholesky";
    case Generator::CirculantFbm:
      return "circulant_fbm";
    case Generator::SfbmReflection:
      return "sfbm_reflection";
    case Generator::Imported:
      return "imported";
  }
  return "unknown";
}

namespace {

void require_grid(int n) {
  if (n < 4) throw DomainError("grid count n must be at least 4");
}

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- Cholesky

struct CholeskySampler::Factor {
  Eigen::MatrixXd lower;
};

CholeskySampler::CholeskySampler(const CovarianceModel& model, int n)
    : factor_(std::make_unique<Factor>()), horizon_(model.horizon()), n_(n) {
  require_grid(n);
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = model.cov(model.horizon() * (i + 1) / n, model.horizon() * (j + 1) / n);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  const double max_diag = gram.diagonal().maxCoeff();

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  double relative = 0.0;
  while (llt.info() != Eigen::Success) {
    relative = relative == 0.0 ? 1e-14 : relative * 10.0;
    if (relative > 1e-10 * (1.0 + 1e-9)) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
      const auto d = ldlt.vectorD();
      int pivot = 0;
      while (pivot < d.size() && d(pivot) > 0.0) ++pivot;
      std::ostringstream msg;
      msg << "Cholesky factorization of the " << n << "x" << n << " Gram matrix for " << model.spec()
          << " failed at pivot " << pivot << " even with jitter 1e-10 * max diagonal";
      throw SimulationError(msg.str());
    }
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += relative * max_diag;
    llt.compute(jittered);
  }
  jitter_ = relative;
  factor_->lower = llt.matrixL();
}

CholeskySampler::~CholeskySampler() = default;

GridPath CholeskySampler::sample(std::uint64_t seed, std::uint64_t replication) const {
  auto rng = StreamRng::for_replication(seed, replication);
  Eigen::VectorXd z(n_);
  for (int i = 0; i < n_; ++i) z(i) = rng.normal();
  const Eigen::VectorXd x = factor_->lower.triangularView<Eigen::Lower>() * z;

  GridPath path{horizon_, n_, std::vector<double>(n_ + 1, 0.0), seed, Generator::Cholesky};
  for (int i = 0; i < n_; ++i) path.values[i + 1] = x(i);
  return path;
}

// ---------------------------------------------------------------- Circulant

struct CirculantFbmSampler::Plan {
  int size = 0;                  // 2n
  std::vector<double> scale;     // sqrt(lambda_k / size), k = 0..n
  fftw_plan c2r = nullptr;

  ~Plan() {
    if (c2r != nullptr) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(c2r);
    }
  }
};

CirculantFbmSampler::CirculantFbmSampler(double gamma, int n, double horizon)
    : plan_(std::make_unique<Plan>()), horizon_(horizon), n_(n) {
  require_grid(n);
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("fBm gamma outside (0, 1)");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");

  const int size = 2 * n;
  const double p = 2.0 * gamma;
  const double unit = std::pow(horizon / n, p);
  auto autocov = [&](int k) {
    return 0.5 * unit * (pow_abs(k + 1.0, p) - 2.0 * pow_abs(k, p) + pow_abs(k - 1.0, p));
  };

  double* row = fftw_alloc_real(size);
  fftw_complex* spectrum = fftw_alloc_complex(n + 1);
  for (int k = 0; k <= n; ++k) row[k] = autocov(k);
  for (int k = 1; k < n; ++k) row[size - k] = autocov(k);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan r2c = fftw_plan_dft_r2c_1d(size, row, spectrum, FFTW_ESTIMATE);
    fftw_execute(r2c);
    fftw_destroy_plan(r2c);
  }

  double max_eig = 0.0;
  double min_eig = 0.0;
  for (int k = 0; k <= n; ++k) {
    max_eig = std::max(max_eig, spectrum[k][0]);
    min_eig = std::min(min_eig, spectrum[k][0]);
  }
  if (min_eig < -1e-9 * max_eig) {
    fftw_free(row);
    fftw_free(spectrum);
    std::ostringstream msg;
    msg << "circulant embedding has eigenvalue " << min_eig << " (max " << max_eig << ")";
    throw SimulationError(msg.str());
  }
  plan_->size = size;
  plan_->scale.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    plan_->scale[k] = std::sqrt(std::max(spectrum[k][0], 0.0) / size);
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan_->c2r = fftw_plan_dft_c2r_1d(size, spectrum, row, FFTW_ESTIMATE);
  }
  fftw_free(row);
  fftw_free(spectrum);
}

CirculantFbmSampler::~CirculantFbmSampler() = default;

std::vector<double> CirculantFbmSampler::sample_increments(std::uint64_t seed,
                                                           std::uint64_t replication) const {
  auto rng = StreamRng::for_replication(seed, replication);
  const int size = plan_->size;
  fftw_complex* w = fftw_alloc_complex(n_ + 1);
  double* y = fftw_alloc_real(size);
  const auto& scale = plan_->scale;

  // Hermitian weights; c2r supplies the conjugate half.
  w[0][0] = scale[0] * rng.normal();
  w[0][1] = 0.0;
  for (int k = 1; k < n_; ++k) {
    const double s = scale[k] * M_SQRT1_2;
    w[k][0] = s * rng.normal();
    w[k][1] = s * rng.normal();
  }
  w[n_][0] = scale[n_] * rng.normal();
  w[n_][1] = 0.0;
  fftw_execute_dft_c2r(plan_->c2r, w, y);

  std::vector<double> increments(y, y + n_);
  fftw_free(w);
  fftw_free(y);
  return increments;
}

GridPath CirculantFbmSampler::sample(std::uint64_t seed, std::uint64_t replication) const {
  const auto increments = sample_increments(seed, replication);
  GridPath path{horizon_, n_, std::vector<double>(n_ + 1, 0.0), seed,
                Generator::CirculantFbm};
  double acc = 0.0;
  for (int k = 0; k < n_; ++k) {
    acc += increments[k];
    path.values[k + 1] = acc;
  }
  return path;
}

// ---------------------------------------------------------------- Reflection

SfbmReflectionSampler::SfbmReflectionSampler(double hurst, int n, double horizon)
    : two_sided_(hurst, 2 * n, 2.0 * horizon), horizon_(horizon), n_(n) {
  require_grid(n);
}

GridPath SfbmReflectionSampler::sample(std::uint64_t seed, std::uint64_t replication) const {
  const auto xi = two_sided_.sample_increments(seed, replication);
  // walk[k] = B at time -T + k h relative to B_{-T}; origin at k = n.
  std::vector<double> walk(2 * n_ + 1, 0.0);
  for (int k = 0; k < 2 * n_; ++k) walk[k + 1] = walk[k] + xi[k];

  GridPath path{horizon_, n_, std::vector<double>(n_ + 1, 0.0), seed,
                Generator::SfbmReflection};
  const double origin = walk[n_];
  for (int j = 1; j <= n_; ++j) {
    path.values[j] = ((walk[n_ + j] - origin) + (walk[n_ - j] - origin)) * M_SQRT1_2;
  }
  return path;
}

bool sfbm_reflection_self_check(double hurst, double horizon) {
  const auto model = CovarianceModel::sfbm(hurst, horizon);
  const double p = 2.0 * hurst;
  auto two_sided = [p](double a, double b) {
    return 0.5 * (pow_abs(a, p) + pow_abs(b, p) - pow_abs(a - b, p));
  };
  StreamRng rng(0x5F5EED5F5EEDULL);
  for (int i = 0; i < 50; ++i) {
    const double s = horizon * rng.uniform_open();
    const double t = horizon * rng.uniform_open();
    const double reflected =
        0.5 * (two_sided(s, t) + two_sided(s, -t) + two_sided(-s, t) + two_sided(-s, -t));
    if (std::fabs(reflected - model.cov(s, t)) > 1e-10) return false;
  }
  return true;
}

std::unique_ptr<PathSampler> make_sampler(const CovarianceModel& model, int n) {
  switch (model.kind()) {
    case ModelKind::Fbm:
      return std::make_unique<CirculantFbmSampler>(model.hurst(), n, model.horizon());
    case ModelKind::Sfbm:
      if (sfbm_reflection_self_check(model.hurst(), model.horizon())) {
        return std::make_unique<SfbmReflectionSampler>(model.hurst(), n, model.horizon());
      }
      return std::make_unique<CholeskySampler>(model, n);
    case ModelKind::Bifbm:
    case ModelKind::Custom:
      return std::make_unique<CholeskySampler>(model, n);
  }
  return std::make_unique<CholeskySampler>(model, n);
}

GridPath simulate_cholesky(const CovarianceModel& model, int n, std::uint64_t seed) {
  return CholeskySampler(model, n).sample(seed);
}

GridPath simulate_fbm_circulant(double gamma, int n, double horizon, std::uint64_t seed) {
  return CirculantFbmSampler(gamma, n, horizon).sample(seed);
}

GridPath simulate_sfbm_reflection(double hurst, int n, double horizon, std::uint64_t seed) {
  return SfbmReflectionSampler(hurst, n, horizon).sample(seed);
}

GridPath simulate(const CovarianceModel& model, int n, std::uint64_t seed) {
  return make_sampler(model, n)->sample(seed);
}

}  // namespace orey
