#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace docgen {

// Stable, language-independent randomness. Every documentary is reproducible
// from its seed, so these algorithms are part of the output contract:
//
//   splitmix64_mix(z):  z += 0x9E3779B97F4A7C15;
//                       z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                       z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                       return z ^ (z >> 31);
//   Rng(seed):          xoshiro256** with state s[0..3] filled by four
//                       successive SplitMix64 outputs starting from `seed`.
//   uniform(n):         threshold = (2^64 - n) mod n; draw r until
//                       r >= threshold; return r mod n.
//   shuffle:            Fisher-Yates, i from size-1 down to 1,
//                       swap(i, uniform(i + 1)).
//   derive_seed(s, k):  splitmix64_mix(s ^ splitmix64_mix(k)).
//
// README.md carries the same description with reference vectors.
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t uniform(std::uint64_t n) noexcept;

  template <typename T, std::size_t Extent>
  void shuffle(std::span<T, Extent> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace docgen
