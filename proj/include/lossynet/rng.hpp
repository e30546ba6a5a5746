#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace lossynet {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a counter.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `counter` under `master`. Streams with distinct counters are
/// decorrelated; the mapping is fixed so results never depend on thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept;

/// Seeded random source with platform-independent output. The standard
/// distributions are implementation-defined, so the conversions from raw
/// 64-bit words are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on (lo, hi].
  double uniform_open_closed(double lo, double hi) { return hi - (hi - lo) * uniform(); }

  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lossynet
