#include "lossynet/rng.hpp"

namespace lossynet {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return r % n;
}

}  // namespace lossynet
