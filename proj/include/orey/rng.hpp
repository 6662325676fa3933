#pragma once

#include <cstdint>

namespace orey {

/// SplitMix64 stream. Each (seed, replication) pair owns one stream, keyed by
/// mix(seed) ^ replication, so results do not depend on how work is scheduled.
/// The seed is mixed first: a raw seed ^ index would hand seeds 1 and 2 the
/// same set of streams over reps 0..M-1.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : state_(mix(key)) {}

  static StreamRng for_replication(std::uint64_t seed, std::uint64_t replication) {
    return StreamRng(mix(seed) ^ replication);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the inverse CDF.
  double normal();

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace orey
