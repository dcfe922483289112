#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "secswipt/types.hpp"

namespace secswipt {

/// Seeded generator for uniform / Gaussian / circular complex Gaussian draws.
/// A given seed always reproduces the same sequence, independent of platform
/// library details (the Gaussian path is an explicit Marsaglia polar method).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  Scalar uniform() {
    return static_cast<Scalar>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal N(0, 1).
  Scalar normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    Scalar a, b, s;
    do {
      a = 2.0 * uniform() - 1.0;
      b = 2.0 * uniform() - 1.0;
      s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const Scalar f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
  }

  /// Circularly symmetric complex Gaussian CN(0, 1) (unit total variance).
  Complex cnormal() {
    const Scalar re = normal();
    const Scalar im = normal();
    return Complex(re * 0.70710678118654752440, im * 0.70710678118654752440);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  Scalar spare_ = 0.0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Derives a child seed from a master seed and a path of tags, so that
/// independent realizations / frames / slots get disjoint, order-independent
/// streams. Deterministic pure function of its inputs.
inline std::uint64_t stream_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = detail::splitmix64(master);
  for (std::uint64_t tag : path) {
    s = detail::splitmix64(s ^ detail::splitmix64(tag));
  }
  return s;
}

// Tags for the harness stream hierarchy.
namespace stream {
inline constexpr std::uint64_t kPlacement = 0xA1;
inline constexpr std::uint64_t kSlot = 0xB2;
inline constexpr std::uint64_t kFrameSample = 0xC3;
inline constexpr std::uint64_t kHeuristic = 0xD4;
inline constexpr std::uint64_t kScheme = 0xE5;
inline constexpr std::uint64_t kPerturb = 0xF6;
}  // namespace stream

}  // namespace secswipt
