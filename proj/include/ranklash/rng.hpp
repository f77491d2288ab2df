#pragma once

#include <cstdint>

namespace ranklash {

// Counter-based uniform stream: each draw is a pure function of
// (seed, episode, round, player), so any schedule of episodes over threads
// sees the same numbers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed), key_(mix(seed)) {}

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  class Episode {
   public:
    explicit Episode(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t round, std::uint64_t player) const {
      return mix(mix(key_ ^ round) ^ player);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t round, std::uint64_t player) const {
      return static_cast<double>(bits(round, player) >> 11) * 0x1.0p-53;
    }

   private:
    std::uint64_t key_;
  };

  Episode episode(std::uint64_t index) const { return Episode(mix(key_ ^ index)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
};

}  // namespace ranklash
