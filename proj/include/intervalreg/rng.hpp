#pragma once

/// \file
/// Counter-based random numbers.
///
/// Draw number `k` of stream `s` under seed `seed` is
///
///     key  = splitmix64(seed + splitmix64(s))
///     x_k  = splitmix64(key + (k + 1) * 0x9E3779B97F4A7C15)
///
/// where splitmix64 is the finalizer of Steele, Lea and Flood's SplitMix64.
/// Doubles in [0, 1) take the top 53 bits of x_k. Nothing depends on the
/// standard library's distributions, so sequences are identical on every
/// platform, and any draw can be addressed directly by (seed, stream, k).

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace intervalreg {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

/// Well-known stream identifiers. Distinct consumers of one seed use distinct
/// streams so that adding draws to one never shifts another.
namespace streams {
inline constexpr std::uint64_t kIntervalWidth = 1;
inline constexpr std::uint64_t kIntervalLocation = 2;
inline constexpr std::uint64_t kInit = 3;
inline constexpr std::uint64_t kAdversaryInit = 4;
inline constexpr std::uint64_t kShuffle = 5;
inline constexpr std::uint64_t kSplit = 6;
inline constexpr std::uint64_t kPairs = 7;
inline constexpr std::uint64_t kPowerIteration = 8;
}  // namespace streams

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64(seed + splitmix64(stream))) {}

  /// Random access: the k-th draw of this stream, independent of position.
  [[nodiscard]] constexpr std::uint64_t at(std::uint64_t k) const noexcept {
    return splitmix64(key_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
  }

  constexpr std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform in [0, 1).
  constexpr double uniform() noexcept { return to_unit(next_u64()); }
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  [[nodiscard]] constexpr double uniform_at(std::uint64_t k) const noexcept { return to_unit(at(k)); }

  /// Uniform integer in [0, n), by rejection so every value is equally likely.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

  static constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11U) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::span<T> items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

[[nodiscard]] inline std::vector<std::size_t> permutation(std::size_t n, CounterRng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(idx), rng);
  return idx;
}

}  // namespace intervalreg
