#include "kdesorb/site_law.hpp"

#include <cmath>
#include <stdexcept>

#include "kdesorb/rng.hpp"

namespace kdesorb {

namespace {

void check_exponent(double m) {
  if (!(m > 0 && m < 1))
    throw std::invalid_argument(
        "site law: exponent m must lie strictly between 0 and 1");
}

void check_kmin(double k_min) {
  if (!(k_min > 0) || !std::isfinite(k_min))
    throw std::invalid_argument("site law: K_min must be positive and finite");
}

}  // namespace

SiteLaw SiteLaw::direct(double m, double k_min) {
  check_exponent(m);
  check_kmin(k_min);
  return SiteLaw{m, k_min};
}

SiteLaw SiteLaw::from_deviation(double m, double epsilon, double A_c) {
  check_exponent(m);
  return SiteLaw{m, kmin_from_deviation(epsilon, m, A_c)};
}

double SiteLaw::cdf(double khat) const {
  if (khat <= k_min) return 0.0;
  return 1.0 - std::pow(k_min / khat, m);
}

double sample_khat(double m, double k_min, double zeta) {
  if (!(m > 0))
    throw std::invalid_argument("sample_khat: exponent must be positive");
  check_kmin(k_min);
  if (!(zeta >= 0 && zeta < 1))
    throw std::invalid_argument("sample_khat: zeta must lie in [0, 1)");
  return k_min * std::pow(1.0 - zeta, -1.0 / m);
}

// kappa(epsilon, m) is the value of K_min * A where the first-order relative
// deviation from the Freundlich limit reaches epsilon:
// epsilon = sin((1-m) pi) / pi * kappa^(1-m) / (1-m).
static double kappa(double epsilon, double m) {
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument(
        "deviation level epsilon must lie strictly between 0 and 1");
  const double one_m = 1.0 - m;
  return std::pow(epsilon * M_PI * one_m / std::sin(one_m * M_PI),
                  1.0 / one_m);
}

double kmin_from_deviation(double epsilon, double m, double A_c) {
  check_exponent(m);
  if (!(A_c > 0) || !std::isfinite(A_c))
    throw std::invalid_argument("A_c must be positive and finite");
  return kappa(epsilon, m) / A_c;
}

double critical_concentration(double epsilon, double m, double k_min) {
  check_exponent(m);
  check_kmin(k_min);
  return kappa(epsilon, m) / k_min;
}

std::vector<double> assign_site_constants(std::size_t n_sites,
                                          const SiteLaw& law, double k_b,
                                          std::uint64_t seed) {
  check_exponent(law.m);
  check_kmin(law.k_min);
  if (!(k_b >= 0) || !std::isfinite(k_b))
    throw std::invalid_argument("k_b must be non-negative and finite");
  std::vector<double> kf(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) {
    const double zeta = rng::uniform_halfopen(
        rng::bits(seed, rng::Stream::site_constants, 0, i));
    kf[i] = k_b * sample_khat(law.m, law.k_min, zeta);
  }
  return kf;
}

}  // namespace kdesorb
