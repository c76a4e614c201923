#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "kdesorb/rng.hpp"
#include "support/oracles.hpp"

using namespace kdesorb;

TEST_CASE("uniform_open stays strictly inside (0,1)") {
  CHECK(rng::uniform_open(0) > 0.0);
  CHECK(rng::uniform_open(~0ULL) < 1.0);
  CHECK(rng::uniform_open(0) == 0.5 * 0x1p-52);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = rng::uniform_open(rng::bits(1, rng::Stream::forward, 0, i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_halfopen includes 0, excludes 1") {
  CHECK(rng::uniform_halfopen(0) == 0.0);
  CHECK(rng::uniform_halfopen(~0ULL) < 1.0);
}

TEST_CASE("bits is a pure function of its key") {
  const auto a = rng::bits(42, rng::Stream::diffusion, 7, 13, 1);
  const auto b = rng::bits(42, rng::Stream::diffusion, 7, 13, 1);
  CHECK(a == b);
  // every component of the key matters
  CHECK(a != rng::bits(43, rng::Stream::diffusion, 7, 13, 1));
  CHECK(a != rng::bits(42, rng::Stream::backward, 7, 13, 1));
  CHECK(a != rng::bits(42, rng::Stream::diffusion, 8, 13, 1));
  CHECK(a != rng::bits(42, rng::Stream::diffusion, 7, 14, 1));
  CHECK(a != rng::bits(42, rng::Stream::diffusion, 7, 13, 2));
}

TEST_CASE("bits spreads over distinct keys without collisions") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t step = 0; step < 100; ++step)
    for (std::uint64_t i = 0; i < 100; ++i)
      seen.insert(rng::bits(9, rng::Stream::forward, step, i));
  CHECK(seen.size() == 100 * 100);
}

TEST_CASE("uniform_index covers [0,n) roughly uniformly") {
  const std::uint64_t n = 10;
  std::vector<long> counts(n, 0);
  const long draws = 100000;
  for (long i = 0; i < draws; ++i)
    ++counts[rng::uniform_index(rng::bits(3, rng::Stream::shuffle, 0, i), n)];
  for (std::uint64_t c = 0; c < n; ++c) {
    CHECK(oracle::within_binomial_3sigma(static_cast<double>(counts[c]), draws,
                                         1.0 / n));
  }
}

TEST_CASE("standard_normal has the right first two moments") {
  std::vector<double> xs;
  xs.reserve(100000);
  for (long i = 0; i < 100000; ++i) {
    xs.push_back(rng::standard_normal(
        rng::bits(5, rng::Stream::diffusion, 0, i, 0),
        rng::bits(5, rng::Stream::diffusion, 0, i, 1)));
  }
  // 3 sigma bands for the mean and (approximately) the variance of n draws
  CHECK(std::abs(oracle::mean(xs)) < 3.0 / std::sqrt(100000.0));
  CHECK(oracle::variance(xs) == doctest::Approx(1.0).epsilon(0.02));
}
