#include "nfuq/rng.hpp"

#include <algorithm>

namespace nfuq {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t index) const noexcept {
  // Three chained mixing rounds keyed by seed, stream and counter.
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ (stream_ * 0xd1b54a32d192ed03ULL));
  h = splitmix64(h ^ (index * 0x8cb92ba72f3d8dd7ULL + 0x2545f4914f6cdd1dULL));
  return h;
}

double CounterRng::uniform01(std::uint64_t index) const noexcept {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t index, double lo, double hi) const noexcept {
  if (lo == hi) return lo;
  return std::min(hi, lo + (hi - lo) * uniform01(index));
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace nfuq
