#ifndef CHOLPARAM_RNG_HPP
#define CHOLPARAM_RNG_HPP

// Deterministic random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard for a given 64-bit seed. Uniforms are built here rather than with
// std::uniform_real_distribution (which is implementation-defined):
//
//   uniform01()         = (x >> 11) * 2^-53        in [0, 1)
//   uniform_half_open() = 1 - uniform01()          in (0, 1]
//
// Substream k of a seed s is seeded with splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15).
// Any implementation of MT19937-64 plus these three formulas reproduces the
// uniform streams bit for bit.
//
// Standard normals use the Marsaglia polar method on uniform01(); they are
// reproducible run to run but depend on the platform's log/sqrt.

#include <cmath>
#include <cstdint>
#include <random>

namespace cholparam {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Single-owner random stream. Not thread safe; give each thread its own
/// substream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(substream_seed(seed, index));
  }

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform_half_open() { return 1.0 - uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cholparam

#endif  // CHOLPARAM_RNG_HPP
