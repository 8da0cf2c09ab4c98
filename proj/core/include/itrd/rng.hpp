#ifndef ITRD_RNG_HPP
#define ITRD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace itrd {

/// Deterministic random source. A run owns one base seed; independent
/// sub-streams (weight init, data sampling, shuffling) are derived from
/// (seed, stream id) so that consuming more draws in one stream never shifts
/// another. Distributions are implemented here rather than with
/// std::*_distribution, whose output is not pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_seed_(seed), engine_(mix(seed)) {}

  /// Independent generator for the given stream id, derived from the base
  /// seed only (not from this generator's current state).
  Rng stream(std::uint64_t stream_id) const {
    return Rng(base_seed_, mix(base_seed_ ^ mix(stream_id + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; caches the spare deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// Well-spread seed for a named sub-run (dataset, teacher, student...),
  /// so that components sharing one run seed still see unrelated streams.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return mix(base ^ mix(salt + 0x517cc1b727220a95ULL));
  }

 private:
  Rng(std::uint64_t base, std::uint64_t derived) : base_seed_(base), engine_(derived) {}

  // splitmix64 finalizer; spreads low-entropy seeds over 64 bits.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t base_seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace itrd

#endif  // ITRD_RNG_HPP
