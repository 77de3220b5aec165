#pragma once

#include <array>
#include <cstdint>

namespace mnac {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Pure function of (counter, key); conformance is pinned by
// the known-answer vectors in tests/test_rng.cpp.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// SplitMix64 finalizer; used to derive independent 64-bit seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for item `index` under `master`. Used for per-trial seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Counter-based stream. The 64-bit seed is the Philox key, the 64-bit stream
// id occupies the upper half of the counter and the lower half counts blocks,
// so (seed, stream) pairs are independent substreams.
//
// All derived variates (uniforms, normals, bounded integers) are produced with
// explicit arithmetic rather than <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  // Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  bool bernoulli(double p);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace mnac
