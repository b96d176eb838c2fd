#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace kgsim {

// SplitMix64 finalizer, used to derive independent seeds from one user seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions below are
// implemented here instead of using <random> distributions, whose
// algorithms vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t bounded(std::uint64_t n);

  // Unit-rate exponential variate.
  double exponential();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(bounded(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kgsim
