#pragma once

#include <cstdint>
#include <limits>

namespace texlab {

// SplitMix64. Cheap to construct, so every Monte Carlo trial gets its own
// stream derived from (master seed, trial index). Satisfies
// UniformRandomBitGenerator so it can drive <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for `index` under `master`. Distinct (master, index)
  /// pairs give decorrelated seeds.
  static Rng stream(std::uint64_t master, std::uint64_t index) noexcept {
    return Rng(mix(mix(master) ^ (index + 0x632be59bd9b4e019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Derive a child generator; the parent advances by one draw.
  Rng split() noexcept { return Rng(mix((*this)() ^ 0xd1b54a32d192ed03ULL)); }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace texlab
