#pragma once

#include <cmath>
#include <cstdint>

namespace organic {

/// Deterministic splittable generator. A stream is addressed by
/// (seed, stream index); streams derived from the same seed are
/// independent, so per-unit or per-replicate work can run in any
/// order (or in parallel) and still reproduce bitwise.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(seed + 0x9e3779b97f4a7c15ULL);
    state_ = mix(state_ ^ mix(stream + 0xbf58476d1ce4e5b9ULL));
  }

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_gaussian() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bernoulli(double prob) { return next_double() < prob; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace organic
