#pragma once

#include <cstdint>

namespace nfuq {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), so results never depend on draw order or on
/// which thread performs the draw.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t index) const noexcept;
  /// Uniform on [0,1) with 53 random bits.
  double uniform01(std::uint64_t index) const noexcept;
  /// Uniform on [lo,hi]; returns lo exactly when lo == hi.
  double uniform(std::uint64_t index, double lo, double hi) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of Monte Carlo sample `index` under `base_seed`.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

}  // namespace nfuq
