#pragma once

#include <cmath>
#include <cstdint>

namespace funnynodules {

// SplitMix64 output scramble.
inline constexpr std::uint64_t scramble64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless combination of a seed and a counter into a new stream seed.
// Sample k depends only on (seed, k), never on generation order, so samples
// can be produced in parallel or regenerated individually.
inline constexpr std::uint64_t mix_seed(std::uint64_t seed,
                                        std::uint64_t counter) noexcept {
  return scramble64(seed + (counter + 1) * 0x9E3779B97F4A7C15ull);
}

// Sequential SplitMix64 stream with a fixed draw order. fork() derives an
// independent substream per purpose, so one purpose drawing more values never
// shifts another purpose's sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return scramble64(state_);
  }

  // Uniform in [0, 1).
  double next_uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], inclusive.
  int next_int(int lo, int hi) noexcept {
    const int span = hi - lo + 1;
    const int v = lo + static_cast<int>(next_uniform() * span);
    return v > hi ? hi : v;
  }

  // Standard normal, Box-Muller. The second value of each pair is cached so
  // every draw consumes a fixed number of raw values.
  double next_gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  RandomStream fork(std::uint64_t tag) const noexcept {
    return RandomStream(mix_seed(state_, tag));
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace funnynodules
