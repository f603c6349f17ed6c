#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gbb {

/// Stateless counter-based normal generator.
///
/// Every draw is a pure function of (seed, path, step, lane), so any path can
/// be regenerated in isolation and results do not depend on the order or the
/// thread in which paths are simulated. Keys are hashed with the SplitMix64
/// finalizer; a Box-Muller transform turns two 53-bit uniforms into a normal.
class CounterNormal {
public:
  explicit constexpr CounterNormal(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double operator()(std::uint64_t path, std::uint64_t step, std::uint64_t lane = 0) const noexcept {
    std::uint64_t key = mix(seed_ + kGolden * (path + 1));
    key = mix(key ^ (kStepMul * (step + 1)));
    key = mix(key ^ (kLaneMul * (lane + 1)));
    const double u1 = to_unit_open(mix(key));
    const double u2 = to_unit_open(mix(key + kGolden));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStepMul = 0xd1b54a32d192ed03ULL;
  static constexpr std::uint64_t kLaneMul = 0xaef17502108ef2d9ULL;

  // (0, 1]: never zero, so log(u) is finite.
  static double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t seed_;
};

}  // namespace gbb
