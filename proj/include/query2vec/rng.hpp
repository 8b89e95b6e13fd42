#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace q2v {

// SplitMix64 stream generator. All randomness in the library flows through
// this so results are identical across platforms and standard-library
// versions (std:: distributions are implementation-defined).
//
// A generator can be keyed by (seed, k1, k2, ...) to fan one master seed out
// to independent deterministic streams, e.g. per (template, instance) or per
// worker thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed + 0x9e3779b97f4a7c15ULL)) {}

  template <typename... Keys>
  Rng(std::uint64_t seed, Keys... keys) : Rng(seed) {
    (absorb(static_cast<std::uint64_t>(keys)), ...);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t next_range(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    next_range(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Fisher-Yates; std::shuffle's draw sequence is unspecified.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_range(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  void absorb(std::uint64_t key) {
    state_ = mix(state_ ^ mix(key + 0x9e3779b97f4a7c15ULL));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace q2v
