#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mnac/rng.hpp"

using namespace mnac;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream words are the philox output of (block, stream) under the seed") {
  Rng rng(0x0123456789abcdefull, 5);
  const auto block0 = philox4x32_10({0, 0, 5, 0}, {0x89abcdef, 0x01234567});
  CHECK(rng.next_u64() == ((std::uint64_t{block0[1]} << 32) | block0[0]));
  CHECK(rng.next_u64() == ((std::uint64_t{block0[3]} << 32) | block0[2]));
  const auto block1 = philox4x32_10({1, 0, 5, 0}, {0x89abcdef, 0x01234567});
  CHECK(rng.next_u64() == ((std::uint64_t{block1[1]} << 32) | block1[0]));
}

TEST_CASE("same seed and stream reproduce; different streams diverge") {
  Rng a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs |= (x != c.normal());
  }
  CHECK(differs);
}

TEST_CASE("derived seeds are distinct across indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(7, i));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("uniform lies in [0, 1) with mean 1/2") {
  Rng rng(1);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n) * 1.5);
}

TEST_CASE("uniform_below is unbiased by chi-square") {
  Rng rng(99);
  const int bins = 7, n = 70000;
  std::vector<int> count(bins, 0);
  for (int i = 0; i < n; ++i) ++count[rng.uniform_below(bins)];
  double chi2 = 0;
  for (int c : count) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  // 6 degrees of freedom; 99.9% quantile is 22.46
  CHECK(chi2 < 22.46);
  CHECK_THROWS(rng.uniform_below(0));
}

TEST_CASE("normal draws have zero mean and unit variance") {
  Rng rng(2024);
  const int n = 400000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s / n) < 3.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 3.0 * std::sqrt(96.0 / n));
}
