#pragma once

#include <cmath>
#include <cstdint>

namespace enlab {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output i is a pure function of (key, i).
/// Streams for independent paths are derived with `stream(master, index)`, so
/// results never depend on how work is distributed across threads.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(mix64(key)), counter_(counter) {}

  static constexpr CounterRng stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return CounterRng(mix64(master_seed) ^ mix64(index * 0xd1b54a32d192ed03ULL + 1));
  }

  constexpr std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() noexcept { return 1.0 - uniform(); }

  double exponential(double rate = 1.0) noexcept { return -std::log(uniform_open0()) / rate; }

  /// Integer uniform on [lo, hi] (inclusive); bias is below 2^-32 for the small ranges used here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace enlab
