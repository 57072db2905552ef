#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace domattr {

/// splitmix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for (seed, i, j). Depends only on its arguments, so streams can
/// be created in any order (or concurrently) and still reproduce exactly:
///   child = mix64(mix64(mix64(seed) ^ i) ^ j)
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t j = 0) {
  return mix64(mix64(mix64(seed) ^ i) ^ j);
}

/// Deterministic random stream. The engine is mt19937_64, whose output sequence
/// is fixed by the standard; the variate transforms below are ours, so samples
/// are bit-identical across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace domattr
