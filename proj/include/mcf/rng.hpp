#pragma once

#include <cstdint>

namespace mcf {

/// Counter-based pseudo random generator (splitmix64 over a counter).
/// Streams are fully determined by (seed, counter), so runs are
/// reproducible across platforms and independent of call order within
/// a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : base_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  /// Uniform in [0, bound), bound > 0. Rejection-free modulo with
  /// negligible bias for bounds far below 2^64; fine for sampling.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Signed uniform in [lo, hi] inclusive.
  std::int64_t next_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Derive an independent stream, e.g. one per solver phase.
  Rng fork(std::uint64_t stream) const {
    Rng r;
    r.base_ = mix(base_ ^ mix(stream + 0xbf58476d1ce4e5b9ull));
    return r;
  }

  std::uint64_t state() const { return base_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace mcf
