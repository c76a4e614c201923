#pragma once
#include <cstdint>
#include <vector>

#include "kdesorb/config.hpp"

namespace kdesorb {

// Surface sites are immobile and never created or destroyed; only their
// occupancy changes. A free site is a B particle, an occupied site is an
// adsorbed complex C carrying the same position and rate constant. Keeping
// both species in one fixed array makes the conservation laws structural:
// N_A + N_C and N_B + N_C cannot drift because reactions only flip flags.
struct SiteArray {
  std::vector<double> pos;            // sorted ascending, in [0, omega)
  std::vector<double> kf;             // per-site forward rate constant
  std::vector<std::uint8_t> occupied; // 1 = complex (C), 0 = free (B)

  std::size_t size() const { return pos.size(); }
};

struct ParticleState {
  std::vector<double> a_pos;  // mobile adsorbate positions, in [0, omega)
  SiteArray sites;

  // Occupied sites in adsorption order: c_slots[i] is a site index. The
  // desorption sweep walks this list, so its order is part of the
  // deterministic protocol. site_c_index inverts it (-1 = free).
  std::vector<std::int32_t> c_slots;
  std::vector<std::int32_t> site_c_index;

  double time = 0.0;
  long step = 0;

  std::size_t n_a() const { return a_pos.size(); }
  std::size_t n_c() const { return c_slots.size(); }
  std::size_t n_b() const { return sites.size() - c_slots.size(); }
};

// One row of the simulation time series.
struct TimeSeriesRecord {
  long step = 0;
  double t = 0.0;
  double conc_A = 0.0;
  double conc_B = 0.0;
  double conc_C = 0.0;
  double ratio = 0.0;        // conc_C / (conc_A * conc_B); NaN when undefined
  bool ratio_defined = true; // false iff conc_A * conc_B == 0
  double h_opt = 0.0;        // bandwidth used this step (0 for the initial row)
  long n_forward = 0;
  long n_backward = 0;
};

// Builds the initial state: A particles and sites placed uniformly on
// [0, omega), site rate constants assigned per the site model, and the
// initial complexes chosen uniformly among sites. All draws are keyed on
// cfg.seed. Throws std::invalid_argument on invalid config.
ParticleState initialize_state(const SimConfig& cfg);

// Concentration snapshot of the current state. h_opt and the event counters
// are left zero; the engine fills them in.
TimeSeriesRecord concentrations(const ParticleState& st, const SimConfig& cfg);

// Mean and sample std dev of conc_C over the last `window` records. Throws
// std::invalid_argument if window < 1 or the series is shorter than window.
struct EquilibriumStats {
  double mean_A = 0.0;
  double mean_C = 0.0;
  double mean_ratio = 0.0;  // mean of defined ratios; NaN if none defined
  double std_C = 0.0;
};
EquilibriumStats equilibrium_average(const std::vector<TimeSeriesRecord>& series,
                                     long window);

// Minimum-image distance on the periodic domain, always in [0, omega/2].
inline double min_image(double a, double b, double omega) {
  double d = a - b;
  if (d < 0) d = -d;
  if (d > omega - d) d = omega - d;
  return d;
}

// Wrap a coordinate into [0, omega).
inline double wrap(double x, double omega) {
  x -= omega * static_cast<long long>(x / omega);
  if (x < 0) x += omega;
  if (x >= omega) x -= omega;
  return x;
}

}  // namespace kdesorb
