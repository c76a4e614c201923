#include "kdesorb/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kdesorb/rng.hpp"
#include "kdesorb/site_law.hpp"

namespace kdesorb {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw std::invalid_argument("config: " + field + ": " + msg);
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) fail(field, "must be finite");
}

}  // namespace

void SimConfig::validate() const {
  require_finite(omega, "omega");
  if (omega <= 0) fail("omega", "must be positive");
  require_finite(diffusion, "diffusion");
  if (diffusion < 0) fail("diffusion", "must be non-negative");
  require_finite(dt, "dt");
  if (dt <= 0) fail("dt", "must be positive");
  if (n_steps < 0) fail("steps", "must be non-negative");
  require_finite(particle_mass, "particle_mass");
  if (particle_mass <= 0) fail("particle_mass", "must be positive");
  require_finite(conc_A0, "conc_a0");
  if (conc_A0 < 0) fail("conc_a0", "must be non-negative");
  require_finite(conc_B0, "conc_b0");
  if (conc_B0 < 0) fail("conc_b0", "must be non-negative");
  require_finite(conc_C0, "conc_c0");
  if (conc_C0 < 0) fail("conc_c0", "must be non-negative");
  require_finite(k_b, "k_b");
  if (k_b < 0) fail("k_b", "must be non-negative");
  if (k_b * dt > 1.0)
    fail("k_b", "k_b * dt exceeds 1, not a valid desorption probability");
  if (record_every < 1) fail("record_every", "must be at least 1");

  if (sites.kind == SiteModelKind::homogeneous) {
    require_finite(sites.k_f, "sites.k_f");
    if (sites.k_f < 0) fail("sites.k_f", "must be non-negative");
  } else {
    require_finite(sites.m, "sites.m");
    if (!(sites.m > 0 && sites.m < 1))
      fail("sites.m", "must lie strictly between 0 and 1");
    if (sites.k_min_direct) {
      require_finite(sites.k_min, "sites.k_min");
      if (sites.k_min <= 0) fail("sites.k_min", "must be positive");
    } else {
      require_finite(sites.epsilon, "sites.epsilon");
      if (!(sites.epsilon > 0 && sites.epsilon < 1))
        fail("sites.epsilon", "must lie strictly between 0 and 1");
      require_finite(sites.A_c, "sites.a_c");
      if (sites.A_c <= 0) fail("sites.a_c", "must be positive");
    }
  }

  if (bandwidth.variant == BandwidthVariant::rule_of_thumb) {
    require_finite(bandwidth.prefactor, "bandwidth.prefactor");
    if (bandwidth.prefactor <= 0) fail("bandwidth.prefactor", "must be positive");
  } else {
    require_finite(bandwidth.fixed_h, "bandwidth.h");
    if (bandwidth.fixed_h <= 0) fail("bandwidth.h", "must be positive");
  }
}

double SimConfig::resolved_k_min() const {
  if (sites.kind != SiteModelKind::heterogeneous)
    throw std::logic_error("resolved_k_min: homogeneous site model");
  if (sites.k_min_direct) return sites.k_min;
  return kmin_from_deviation(sites.epsilon, sites.m, sites.A_c);
}

long particle_count(double conc, double omega, double particle_mass) {
  return std::llround(conc * omega / particle_mass);
}

ParticleState initialize_state(const SimConfig& cfg) {
  cfg.validate();
  const long n_a = particle_count(cfg.conc_A0, cfg.omega, cfg.particle_mass);
  const long n_c = particle_count(cfg.conc_C0, cfg.omega, cfg.particle_mass);
  const long n_sites =
      particle_count(cfg.conc_B0, cfg.omega, cfg.particle_mass) + n_c;

  ParticleState st;
  st.a_pos.resize(n_a);
  for (long i = 0; i < n_a; ++i) {
    st.a_pos[i] = cfg.omega * rng::uniform_halfopen(rng::bits(
                                  cfg.seed, rng::Stream::init_positions_a, 0, i));
  }

  std::vector<double> pos(n_sites);
  for (long i = 0; i < n_sites; ++i) {
    pos[i] = cfg.omega * rng::uniform_halfopen(rng::bits(
                             cfg.seed, rng::Stream::init_positions_site, 0, i));
  }
  std::vector<double> kf;
  if (cfg.sites.kind == SiteModelKind::homogeneous) {
    kf.assign(n_sites, cfg.sites.k_f);
  } else {
    const SiteLaw law = SiteLaw::direct(cfg.sites.m, cfg.resolved_k_min());
    kf = assign_site_constants(n_sites, law, cfg.k_b, cfg.seed);
  }

  // Sort sites by position once; cell ranges rely on this. Stable, so ties
  // keep draw order and the layout is seed-deterministic.
  std::vector<std::int32_t> order(n_sites);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int32_t a, std::int32_t b) { return pos[a] < pos[b]; });
  st.sites.pos.resize(n_sites);
  st.sites.kf.resize(n_sites);
  st.sites.occupied.assign(n_sites, 0);
  for (long i = 0; i < n_sites; ++i) {
    st.sites.pos[i] = pos[order[i]];
    st.sites.kf[i] = kf[order[i]];
  }

  // Initial complexes: n_c distinct sites, uniform, by partial shuffle.
  st.site_c_index.assign(n_sites, -1);
  if (n_c > 0) {
    if (n_c > n_sites)
      fail("conc_c0", "more initial complexes than sites");
    std::vector<std::int32_t> ids(n_sites);
    std::iota(ids.begin(), ids.end(), 0);
    st.c_slots.reserve(n_c);
    for (long i = 0; i < n_c; ++i) {
      const std::uint64_t b =
          rng::bits(cfg.seed, rng::Stream::init_occupancy, 0, i);
      const long j = i + static_cast<long>(rng::uniform_index(b, n_sites - i));
      std::swap(ids[i], ids[j]);
      const std::int32_t site = ids[i];
      st.sites.occupied[site] = 1;
      st.site_c_index[site] = static_cast<std::int32_t>(st.c_slots.size());
      st.c_slots.push_back(site);
    }
  }
  return st;
}

TimeSeriesRecord concentrations(const ParticleState& st, const SimConfig& cfg) {
  TimeSeriesRecord r;
  r.step = st.step;
  r.t = st.time;
  const double scale = cfg.particle_mass / cfg.omega;
  r.conc_A = scale * static_cast<double>(st.n_a());
  r.conc_B = scale * static_cast<double>(st.n_b());
  r.conc_C = scale * static_cast<double>(st.n_c());
  if (r.conc_A * r.conc_B == 0) {
    r.ratio_defined = false;
    r.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.ratio = r.conc_C / (r.conc_A * r.conc_B);
  }
  return r;
}

EquilibriumStats equilibrium_average(const std::vector<TimeSeriesRecord>& series,
                                     long window) {
  if (window < 1)
    throw std::invalid_argument("equilibrium_average: window must be positive");
  if (static_cast<long>(series.size()) < window)
    throw std::invalid_argument(
        "equilibrium_average: series shorter than the averaging window");
  const std::size_t begin = series.size() - static_cast<std::size_t>(window);
  EquilibriumStats s;
  double sum_a = 0, sum_c = 0, sum_r = 0;
  long n_ratio = 0;
  for (std::size_t i = begin; i < series.size(); ++i) {
    sum_a += series[i].conc_A;
    sum_c += series[i].conc_C;
    if (series[i].ratio_defined) {
      sum_r += series[i].ratio;
      ++n_ratio;
    }
  }
  const double n = static_cast<double>(window);
  s.mean_A = sum_a / n;
  s.mean_C = sum_c / n;
  s.mean_ratio = n_ratio > 0 ? sum_r / static_cast<double>(n_ratio)
                             : std::numeric_limits<double>::quiet_NaN();
  double ss = 0;
  for (std::size_t i = begin; i < series.size(); ++i) {
    const double d = series[i].conc_C - s.mean_C;
    ss += d * d;
  }
  s.std_C = window > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return s;
}

}  // namespace kdesorb
