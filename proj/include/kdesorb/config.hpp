#pragma once
#include <cstdint>
#include <string>

namespace kdesorb {

enum class BandwidthVariant { rule_of_thumb, fixed };

// Which particle population the bandwidth statistic is computed over.
// mobile_a is the pure estimate of the adsorbate density and the default.
// a_plus_b adds the free-site positions: the immobile phase pins the sample
// spread, so h stays at the kernel scale instead of growing toward the
// domain size when few mobile particles remain.
enum class BandwidthPopulation { mobile_a, a_plus_b };

struct BandwidthConfig {
  BandwidthVariant variant = BandwidthVariant::rule_of_thumb;
  double prefactor = 1.06;  // rule-of-thumb multiplier on the sample std dev
  double fixed_h = 0.0;     // bandwidth for the fixed variant
  BandwidthPopulation population = BandwidthPopulation::mobile_a;
};

enum class SiteModelKind { homogeneous, heterogeneous };

// Surface chemistry. Homogeneous: every site shares one forward rate constant
// k_f. Heterogeneous: each site draws its own K-hat from a truncated power
// law with exponent m and lower bound K_min (possibly derived from a target
// deviation epsilon at concentration A_c), and site k_f = k_b * K-hat.
struct SiteModel {
  SiteModelKind kind = SiteModelKind::homogeneous;
  double k_f = 0.0;

  double m = 0.0;
  double k_min = 0.0;
  double epsilon = 0.0;
  double A_c = 0.0;
  bool k_min_direct = true;  // false: derive K_min from (epsilon, A_c)

  // Experimental mode: redraw K-hat on every candidate encounter instead of
  // fixing it per site. Not the default reading of the model; see README.
  bool redraw_per_encounter = false;
};

struct SimConfig {
  double omega = 200.0;     // periodic domain length
  double diffusion = 1e-2;  // D
  double dt = 1e-2;
  long n_steps = 2000;
  double particle_mass = 1.0;
  double conc_A0 = 0.0;
  double conc_B0 = 0.0;
  double conc_C0 = 0.0;
  double k_b = 0.0;
  SiteModel sites;
  BandwidthConfig bandwidth;
  std::uint64_t seed = 1;
  long record_every = 1;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // K_min, resolving the (epsilon, A_c) parameterization if used.
  double resolved_k_min() const;
};

// Initial particle count for one species: round(conc * omega / m_p).
long particle_count(double conc, double omega, double particle_mass);

}  // namespace kdesorb
