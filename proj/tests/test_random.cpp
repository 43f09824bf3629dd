#include <doctest.h>

#include <cmath>
#include <set>

#include "dpbandit/random.hpp"

using dpbandit::RandomStream;

TEST_CASE("uniform draws stay strictly inside (0, 1)") {
  RandomStream rng(42);
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("equal seeds give equal streams") {
  RandomStream a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs |= x != c.normal();
  }
  CHECK(differs);
}

TEST_CASE("each normal consumes exactly one uniform") {
  RandomStream a(99), b(99);
  for (int i = 0; i < 5; ++i) a.normal();
  for (int i = 0; i < 5; ++i) b.uniform();
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("normal draws have standard moments") {
  RandomStream rng(2024);
  constexpr int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("mix_seed separates sub-streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ULL, 1ULL, 12345ULL}) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(dpbandit::mix_seed(base, i));
  }
  CHECK(seen.size() == 3000);
  CHECK(dpbandit::mix_seed(5, 3) == dpbandit::mix_seed(5, 3));
}
