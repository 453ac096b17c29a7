#ifndef BAGMC_RNG_HPP
#define BAGMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bagmc {

/// SplitMix64 output function.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Child seed for the index-th independent stream under `master`;
/// equals the index-th output of the SplitMix64 sequence seeded at
/// `master`. Used for per-sample and per-replicate seeding so that
/// parallel generation stays reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9e3779b97f4a7c15ull);
}

/// Deterministic random source. The engine is std::mt19937_64 (fully
/// specified by the C++ standard); bounded and real draws below use fixed
/// transforms rather than std distributions, whose algorithms are
/// implementation-defined. Same seed, same stream, on every build of this
/// library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on {0, ..., n-1}. Rejection sampling below the largest
  /// multiple of n keeps the draw exactly uniform.
  int uniform_index(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t rem = (UINT64_MAX % bound + 1) % bound;  // 2^64 mod bound
    std::uint64_t x = engine_();
    while (rem != 0 && x >= UINT64_MAX - rem + 1) x = engine_();
    return static_cast<int>(x % bound);
  }

  /// Uniform on (0, 1] with 53-bit resolution.
  double uniform01() { return double((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller on two uniform draws; the second
  /// deviate of each pair is cached and returned on the next call.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace bagmc

#endif  // BAGMC_RNG_HPP
