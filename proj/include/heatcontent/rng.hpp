#pragma once

#include <cstdint>
#include <random>

namespace heatcontent {

/// Seeded 64-bit generator with deterministic stream splitting.
///
/// The engine is std::mt19937_64. Child streams are seeded by passing
/// (parent seed, stream id) through the SplitMix64 finalizer, so every
/// stochastic output is a pure function of the root seed and the stream ids
/// taken on the way down.
class Rng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5EED;

  explicit Rng(std::uint64_t seed = kDefaultSeed) : seed_(seed), engine_(mix(seed)) {}

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  /// Independent child generator for stream `stream`.
  [[nodiscard]] Rng split(std::uint64_t stream) const {
    return Rng(mix(seed_ ^ mix(stream + 0x9E3779B97F4A7C15ULL)));
  }

  /// Uniform in the open interval (0, 1).
  double uniform_open() {
    for (;;) {
      const double u = std::generate_canonical<double, 64>(engine_);
      if (u > 0.0 && u < 1.0) return u;
    }
  }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace heatcontent
