#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "itrd/rng.hpp"

using itrd::Rng;

TEST_CASE("rng is deterministic per seed") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(8);
  Rng d(7);
  bool any_diff = false;
  for (int i = 0; i < 10; ++i) any_diff |= (c.next_u64() != d.next_u64());
  CHECK(any_diff);
}

TEST_CASE("streams derive from the base seed, not from generator state") {
  Rng base(42);
  const Rng s1_before = base.stream(1);
  base.next_u64();
  base.next_u64();
  Rng s1_after = base.stream(1);
  Rng s1_copy = s1_before;
  for (int i = 0; i < 50; ++i) CHECK(s1_copy.next_u64() == s1_after.next_u64());

  Rng s2 = base.stream(2);
  Rng s1 = base.stream(1);
  bool any_diff = false;
  for (int i = 0; i < 10; ++i) any_diff |= (s1.next_u64() != s2.next_u64());
  CHECK(any_diff);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below respects the bound and covers small ranges") {
  Rng rng(5);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::uint64_t x = rng.below(7);
    REQUIRE(x < 7);
    ++seen[x];
  }
  for (int c : seen) CHECK(c > 0);
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng rng(11);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(std::fabs(var - 1.0) < 0.1);
}

TEST_CASE("shuffle produces a permutation") {
  Rng rng(17);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  rng.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("derive_seed separates named sub-runs") {
  CHECK(Rng::derive_seed(0, 1) == Rng::derive_seed(0, 1));
  CHECK(Rng::derive_seed(0, 1) != Rng::derive_seed(0, 2));
  CHECK(Rng::derive_seed(0, 1) != Rng::derive_seed(1, 1));
}
