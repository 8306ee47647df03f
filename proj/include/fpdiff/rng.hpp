#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace fpdiff {

/// Seeded random source whose draws are identical on every platform.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so the integer and real draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in the closed interval [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Index drawn proportionally to `weights`; weights must not all be zero.
  std::size_t weighted_index(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used for stable content hashes and seed derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Combines a base seed with a label into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace fpdiff
