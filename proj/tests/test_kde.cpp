#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kdesorb/kde.hpp"
#include "kdesorb/quadrature.hpp"
#include "kdesorb/rng.hpp"

using namespace kdesorb;

namespace {

std::vector<double> uniform_sample(std::size_t n, double omega,
                                   std::uint64_t seed) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = omega * rng::uniform_halfopen(
                        rng::bits(seed, rng::Stream::init_positions_a, 0, i));
  return xs;
}

}  // namespace

TEST_CASE("rule-of-thumb bandwidth at the headline scale") {
  // 40000 positions spread over 200 length units: sigma is close to the
  // uniform-distribution value 200/sqrt(12), so h lands near 7.35.
  const auto xs = uniform_sample(40000, 200.0, 11);
  BandwidthConfig cfg;
  const double h = bandwidth(xs, cfg);
  CHECK(h == doctest::Approx(7.35).epsilon(0.01));

  // the rule itself, recomputed the pedestrian way
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sigma = std::sqrt(ss / (xs.size() - 1));
  CHECK(h == doctest::Approx(1.06 * sigma * std::pow(40000.0, -0.2))
                 .epsilon(1e-12));
}

TEST_CASE("bandwidth is translation invariant and scales with dilation") {
  const auto xs = uniform_sample(1000, 10.0, 3);
  BandwidthConfig cfg;
  const double h = bandwidth(xs, cfg);

  std::vector<double> shifted = xs, scaled = xs;
  for (double& x : shifted) x += 123.25;
  for (double& x : scaled) x *= 4.0;
  CHECK(bandwidth(shifted, cfg) == doctest::Approx(h).epsilon(1e-12));
  CHECK(bandwidth(scaled, cfg) == doctest::Approx(4.0 * h).epsilon(1e-12));
}

TEST_CASE("bandwidth rejects degenerate samples, advising the fixed variant") {
  BandwidthConfig cfg;
  CHECK_THROWS_AS(bandwidth(std::vector<double>{1.0}, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(bandwidth(std::vector<double>{2.0, 2.0, 2.0}, cfg),
                  std::invalid_argument);
  try {
    bandwidth(std::vector<double>{}, cfg);
    FAIL("accepted an empty sample");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("fixed") != std::string::npos);
  }

  // the engine-facing variant reports degeneracy as zero instead
  CHECK(bandwidth_or_zero(std::vector<double>{1.0}, cfg) == 0.0);
  CHECK(bandwidth_or_zero(std::vector<double>{2.0, 2.0}, cfg) == 0.0);

  cfg.variant = BandwidthVariant::fixed;
  cfg.fixed_h = 0.7;
  CHECK(bandwidth(std::vector<double>{}, cfg) == 0.7);
  CHECK(bandwidth_or_zero(std::vector<double>{}, cfg) == 0.7);
}

TEST_CASE("p_forward peak value") {
  const KernelParams p{1.0, 0.5, 1.0, 1e-2};
  // k_f m_p dt / (2 h sqrt(pi)) evaluated by hand
  CHECK(p_forward(0.0, p) ==
        doctest::Approx(1.4104739588693909e-3).epsilon(1e-14));
  CHECK(p_peak(p) == p_forward(0.0, p));
}

TEST_CASE("p_forward falls off monotonically and scales linearly") {
  const KernelParams p{2.0, 0.5, 1.0, 1e-2};
  double prev = p_forward(0.0, p);
  for (int i = 1; i <= 40; ++i) {
    const double cur = p_forward(0.25 * i, p);
    CHECK(cur < prev);
    prev = cur;
  }

  KernelParams doubled = p;
  doubled.k_f *= 2;
  KernelParams heavier = p;
  heavier.m_p *= 3;
  for (double r : {0.0, 0.5, 1.7, 4.0}) {
    CHECK(p_forward(r, doubled) ==
          doctest::Approx(2.0 * p_forward(r, p)).epsilon(1e-14));
    CHECK(p_forward(r, heavier) ==
          doctest::Approx(3.0 * p_forward(r, p)).epsilon(1e-14));
  }
}

TEST_CASE("p_forward integrates to k_f m_p dt over the line") {
  const KernelParams p{1.3, 0.5, 2.0, 1e-2};
  const double integral = integrate(
      [&](double r) { return p_forward(r, p); }, -40.0 * p.h, 40.0 * p.h,
      1e-10);
  CHECK(integral == doctest::Approx(p.k_f * p.m_p * p.dt).epsilon(1e-6));
}

TEST_CASE("p_forward clamps at one and reports it") {
  // tiny bandwidth pushes the peak probability far above 1
  const KernelParams p{1e-6, 0.5, 1.0, 1e-2};
  bool clamped = false;
  CHECK(p_forward(0.0, p, &clamped) == 1.0);
  CHECK(clamped);

  const KernelParams mild{1.0, 0.5, 1.0, 1e-2};
  clamped = true;
  CHECK(p_forward(0.0, mild, &clamped) < 1.0);
  CHECK_FALSE(clamped);

  KernelParams bad = mild;
  bad.h = 0.0;
  CHECK_THROWS_AS(p_forward(0.0, bad), std::invalid_argument);
}
