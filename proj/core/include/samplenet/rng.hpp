#pragma once
#include <cstdint>

namespace samplenet {

// Counter-based pseudo-random generator (SplitMix64 output function over an
// incrementing counter). Identical seed gives an identical stream on every
// platform, and fork() derives statistically independent streams so sweep
// workers never share state. No globals; an Rng is a plain value.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0);

  uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_uniform();

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double next_normal();

  // Uniform integer in [0, n), n >= 1.
  uint64_t below(uint64_t n);

  // Independent stream keyed by (seed, stream). The current counter does not
  // enter the fork, so forks taken before and after draws coincide.
  Rng fork(uint64_t stream) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_ = 0;
  uint64_t counter_ = 0;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace samplenet
