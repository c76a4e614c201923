#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

namespace kdesorb {

// Truncated power-law distribution of site equilibrium constants:
// P(K-hat > k) = (K_min / k)^m for k >= K_min, exponent m in (0, 1).
// Heavy-tailed with infinite mean, which is what bends the Freundlich
// isotherm out of the Langmuir shape.
struct SiteLaw {
  double m = 0.0;
  double k_min = 0.0;

  // Validating constructors; both throw std::invalid_argument.
  static SiteLaw direct(double m, double k_min);
  // K_min chosen so the relative deviation from the pure Freundlich limit
  // equals epsilon at concentration A_c.
  static SiteLaw from_deviation(double m, double epsilon, double A_c);

  double cdf(double khat) const;  // 0 below k_min, 1 - (k_min/khat)^m above
};

// Inverse-CDF sample: K_min * (1 - zeta)^(-1/m) for zeta in [0, 1).
// Accepts any m > 0 (the free function is a plain power-law sampler);
// zeta outside [0, 1) throws std::invalid_argument.
double sample_khat(double m, double k_min, double zeta);

// The deviation-level parameterization and its inverse. kappa is the
// dimensionless product K_min * A at which the relative deviation from the
// Freundlich limit equals epsilon, to first order in that deviation:
// kappa = (epsilon * pi * (1 - m) / sin((1 - m) pi))^(1 / (1 - m)).
double kmin_from_deviation(double epsilon, double m, double A_c);
double critical_concentration(double epsilon, double m, double k_min);

// Site forward rate constants k_b * K-hat_i, drawn with keys
// (seed, site_constants stream, 0, i). One call per surface, so equal seeds
// give equal surfaces.
std::vector<double> assign_site_constants(std::size_t n_sites,
                                          const SiteLaw& law, double k_b,
                                          std::uint64_t seed);

}  // namespace kdesorb
