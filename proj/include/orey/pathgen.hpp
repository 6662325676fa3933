#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "orey/kernels.hpp"

namespace orey {

enum class Generator { Cholesky, CirculantFbm, SfbmReflection, Imported };

std::string to_string(Generator g);

/// One trajectory X_{kT/n}, k = 0..n, with values[0] == 0.
struct GridPath {
  double horizon = 1.0;
  int n = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  Generator generator = Generator::Imported;

  double time(int k) const { return horizon * k / n; }
};

/// Draws exact zero-mean Gaussian paths on {kT/n}. Setup (factorization,
/// eigenvalues) happens once in the constructor; sample() is const and
/// may be called concurrently.
class PathSampler {
 public:
  virtual ~PathSampler() = default;
  virtual GridPath sample(std::uint64_t seed, std::uint64_t replication = 0) const = 0;
  virtual Generator generator() const = 0;
  virtual int grid_count() const = 0;
};

/// Dense Cholesky of the Gram matrix cov(iT/n, jT/n), i, j = 1..n.
/// On failure the diagonal is jittered by 1e-14 * max diag, escalating x10 up
/// to 1e-10; beyond that SimulationError names the failing pivot.
class CholeskySampler final : public PathSampler {
 public:
  CholeskySampler(const CovarianceModel& model, int n);
  ~CholeskySampler() override;
  GridPath sample(std::uint64_t seed, std::uint64_t replication = 0) const override;
  Generator generator() const override { return Generator::Cholesky; }
  int grid_count() const override { return n_; }
  /// Relative jitter that was needed (0 when none).
  double jitter() const { return jitter_; }

 private:
  struct Factor;
  std::unique_ptr<Factor> factor_;
  double horizon_;
  int n_;
  double jitter_ = 0.0;
};

/// Circulant embedding of fractional Gaussian noise (size 2n), cumulated
/// into an fBm path.
class CirculantFbmSampler final : public PathSampler {
 public:
  CirculantFbmSampler(double gamma, int n, double horizon);
  ~CirculantFbmSampler() override;
  CirculantFbmSampler(const CirculantFbmSampler&) = delete;
  CirculantFbmSampler& operator=(const CirculantFbmSampler&) = delete;

  GridPath sample(std::uint64_t seed, std::uint64_t replication = 0) const override;
  Generator generator() const override { return Generator::CirculantFbm; }
  int grid_count() const override { return n_; }

  /// n stationary increments drawn with the given stream.
  std::vector<double> sample_increments(std::uint64_t seed, std::uint64_t replication) const;

 private:
  struct Plan;
  std::unique_ptr<Plan> plan_;
  double horizon_;
  int n_;
};

/// sfBm as (B_t + B_{-t}) / sqrt(2) for a two-sided fBm B, sampled on the
/// symmetric grid {-T, ..., T} by circulant embedding.
class SfbmReflectionSampler final : public PathSampler {
 public:
  SfbmReflectionSampler(double hurst, int n, double horizon);
  GridPath sample(std::uint64_t seed, std::uint64_t replication = 0) const override;
  Generator generator() const override { return Generator::SfbmReflection; }
  int grid_count() const override { return n_; }

 private:
  CirculantFbmSampler two_sided_;
  double horizon_;
  int n_;
};

/// Compares the analytic covariance of (B_t + B_{-t}) / sqrt(2) with the sfBm
/// kernel at 50 pseudo-random pairs; true if all agree to 1e-10.
bool sfbm_reflection_self_check(double hurst, double horizon = 1.0);

/// Fastest exact sampler for the model: circulant for fBm, reflection for
/// sfBm (when the self-check passes), Cholesky otherwise.
std::unique_ptr<PathSampler> make_sampler(const CovarianceModel& model, int n);

GridPath simulate_cholesky(const CovarianceModel& model, int n, std::uint64_t seed);
GridPath simulate_fbm_circulant(double gamma, int n, double horizon, std::uint64_t seed);
GridPath simulate_sfbm_reflection(double hurst, int n, double horizon, std::uint64_t seed);
GridPath simulate(const CovarianceModel& model, int n, std::uint64_t seed);

/// CSV "k,t,x" with 17 significant digits; import validates the grid.
void export_path(const GridPath& path, const std::filesystem::path& file);
void export_path(const GridPath& path, std::ostream& out);
GridPath import_path(const std::filesystem::path& file);
GridPath import_path(std::istream& in);

}  // namespace orey
