#pragma once

#include <cstdint>
#include <random>

namespace dpbandit {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `index` derived from `base`:
///   splitmix64(base ^ splitmix64(index + 0x9E3779B97F4A7C15)).
/// Used for per-run and per-trial streams so that adding streams never perturbs
/// existing ones.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Seeded random stream with a fixed, platform-independent transformation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each uniform() consumes exactly one 64-bit word and maps its top
/// 52 bits to the open interval (0, 1) as ((w >> 12) + 0.5) * 2^-52. Each
/// normal() consumes exactly one uniform u and returns the standard normal
/// quantile Phi^-1(u) = -sqrt(2) * erfc_inv(2u) (Boost.Math). The mapping
/// never relies on std::normal_distribution, whose algorithm is
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpbandit
