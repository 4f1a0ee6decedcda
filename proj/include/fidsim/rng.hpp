#pragma once

#include <cmath>
#include <cstdint>

#include "fidsim/units.hpp"

namespace fidsim {

// Counter-free splitmix64 stream. Chosen over std::mt19937 plus
// std::*_distribution because the output must be bit-identical across
// standard-library versions, and because shot batches need cheap
// independent substreams derived from (seed, point, shot) indices.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::uint64_t state_;
};

/// Substream seed for (seed, a, b). Mixing the indices through the
/// splitmix64 finalizer keeps substreams independent of evaluation order,
/// so shot loops may be parallelized without changing any result.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
  RngStream mix(seed ^ (a * 0xd6e8feb86659fd93ull) ^
                (b * 0xca02b43c0355a6bfull));
  mix.next_u64();
  return mix.next_u64();
}

} // namespace fidsim
