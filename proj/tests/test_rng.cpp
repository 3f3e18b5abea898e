#include <cmath>
#include <set>

#include <catch_amalgamated.hpp>

#include "nfuq/rng.hpp"

using namespace nfuq;

TEST_CASE("draws are pure functions of seed, stream and index") {
  const CounterRng a(42, 1), b(42, 1);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(a.bits(i) == b.bits(i));
  // reverse order gives the same values
  for (std::uint64_t i = 100; i-- > 0;) CHECK(a.uniform01(i) == b.uniform01(i));
}

TEST_CASE("streams and seeds decorrelate") {
  const CounterRng a(42, 1), b(42, 2), c(43, 1);
  int same_stream = 0, same_seed = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    same_stream += a.bits(i) == b.bits(i);
    same_seed += a.bits(i) == c.bits(i);
  }
  CHECK(same_stream == 0);
  CHECK(same_seed == 0);
}

TEST_CASE("uniform draws stay in range with the right mean") {
  const CounterRng r(7, 3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform(i, 2.0, 5.0);
    REQUIRE(u >= 2.0);
    REQUIRE(u <= 5.0);
    sum += u;
  }
  // standard error of the mean is 3/sqrt(12 n) ~ 0.0027
  CHECK(std::abs(sum / n - 3.5) < 0.015);
  CHECK(r.uniform(5, 1.25, 1.25) == 1.25);
  const double u = r.uniform01(9);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(123, i));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
