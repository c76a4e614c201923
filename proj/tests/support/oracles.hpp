#pragma once
// Test-side reference implementations, deliberately the slow obvious
// versions, independent of the library code they check.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "kdesorb/config.hpp"

namespace oracle {

// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_statistic(std::vector<double> xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

// Asymptotic critical values of the KS distance.
inline double ks_critical_1pct(std::size_t n) {
  return 1.6276 / std::sqrt(static_cast<double>(n));
}
inline double ks_critical_5pct(std::size_t n) {
  return 1.3581 / std::sqrt(static_cast<double>(n));
}

// Kendall rank correlation by brute-force pair counting; ties count as
// neither concordant nor discordant.
inline double kendall_tau(const std::vector<double>& x,
                          const std::vector<double>& y) {
  const std::size_t n = x.size();
  long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double total = 0.5 * static_cast<double>(n) * (n - 1);
  return (concordant - discordant) / total;
}

// Is an observed success count within 3 sigma of Binomial(n, p)?
inline bool within_binomial_3sigma(double k, double n, double p) {
  const double sd = std::sqrt(n * p * (1 - p));
  return std::abs(k - n * p) <= 3.0 * sd;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

// Shared small-system config used across the engine tests: dense enough to
// react, small enough to stay instant.
inline kdesorb::SimConfig small_langmuir_config() {
  kdesorb::SimConfig cfg;
  cfg.omega = 50;
  cfg.diffusion = 1e-2;
  cfg.dt = 1e-2;
  cfg.n_steps = 50;
  cfg.particle_mass = 1;
  cfg.conc_A0 = 40;
  cfg.conc_B0 = 40;
  cfg.conc_C0 = 1;
  cfg.k_b = 0.1;
  cfg.sites.kind = kdesorb::SiteModelKind::homogeneous;
  cfg.sites.k_f = 0.5;
  cfg.seed = 2024;
  return cfg;
}

}  // namespace oracle
