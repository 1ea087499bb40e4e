#pragma once

// Reproducible random streams.
//
// Each Monte Carlo batch draws from its own std::mt19937_64 seeded with
// splitmix64(seed, stream index), so results depend only on the base seed and
// the batch layout, not on which thread ran a batch.  Uniform doubles are
// built from the top 53 bits directly; std::uniform_real_distribution is
// avoided because its output is not specified across standard libraries.

#include <cstdint>
#include <random>

namespace handoff::rng {

inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-substreams v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
  return derive_seed(derive_seed(seed, i), j);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t seed, std::uint64_t index) : engine_(derive_seed(seed, index)) {}

  // Uniform on the open interval (0, 1).
  double open_unit() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on the open interval (lo, hi).
  double open_uniform(double lo, double hi) { return lo + (hi - lo) * open_unit(); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace handoff::rng
