#include "kdesorb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "kdesorb/kde.hpp"
#include "kdesorb/rng.hpp"
#include "kdesorb/site_law.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kdesorb {

namespace {

// Hits are gathered per fixed-size block of A indices and merged in block
// order, so the hit list (and everything downstream of it) is identical for
// any thread count.
constexpr long kBlock = 4096;

struct Hit {
  std::int32_t a;
  std::int32_t site;
};

template <class F>
void par_for_blocks(long n_blocks, ExecutionPolicy policy, int threads,
                    F&& body) {
#ifdef _OPENMP
  if (policy == ExecutionPolicy::openmp) {
    if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (long b = 0; b < n_blocks; ++b) body(b);
    } else {
#pragma omp parallel for schedule(dynamic)
      for (long b = 0; b < n_blocks; ++b) body(b);
    }
    return;
  }
#else
  (void)policy;
  (void)threads;
#endif
  for (long b = 0; b < n_blocks; ++b) body(b);
}

// Shuffle, then resolve hits sequentially: first claim on a particle or a
// site wins, later hits on consumed members are dropped. Returns the
// reaction count; consumed A flags are left for the caller to compact.
long resolve_hits(ParticleState& st, std::vector<Hit>& hits,
                  std::vector<std::uint8_t>& consumed, std::uint64_t seed,
                  long step) {
  for (std::size_t i = hits.size(); i > 1; --i) {
    const std::uint64_t b =
        rng::bits(seed, rng::Stream::shuffle, step, i - 1);
    std::swap(hits[i - 1], hits[rng::uniform_index(b, i)]);
  }
  long n_forward = 0;
  for (const Hit& h : hits) {
    if (consumed[h.a] || st.sites.occupied[h.site]) continue;
    consumed[h.a] = 1;
    st.sites.occupied[h.site] = 1;
    st.site_c_index[h.site] = static_cast<std::int32_t>(st.c_slots.size());
    st.c_slots.push_back(h.site);
    ++n_forward;
  }
  return n_forward;
}

// Drop consumed A particles. Descending swap-remove: a fixed rule, so the
// surviving slot order is part of the deterministic protocol.
void compact_a(std::vector<double>& a_pos,
               const std::vector<std::uint8_t>& consumed) {
  for (std::size_t i = consumed.size(); i-- > 0;) {
    if (!consumed[i]) continue;
    a_pos[i] = a_pos.back();
    a_pos.pop_back();
  }
}

}  // namespace

void diffuse(std::vector<double>& a_pos, double omega, double diffusion,
             double dt, std::uint64_t seed, long step, ExecutionPolicy policy,
             int threads) {
  if (diffusion == 0 || a_pos.empty()) return;
  const double scale = std::sqrt(2.0 * diffusion * dt);
  const long n = static_cast<long>(a_pos.size());
  const long n_blocks = (n + kBlock - 1) / kBlock;
  par_for_blocks(n_blocks, policy, threads, [&](long b) {
    const long hi = std::min(n, (b + 1) * kBlock);
    for (long i = b * kBlock; i < hi; ++i) {
      const double xi = rng::standard_normal(
          rng::bits(seed, rng::Stream::diffusion, step, i, 0),
          rng::bits(seed, rng::Stream::diffusion, step, i, 1));
      a_pos[i] = wrap(a_pos[i] + scale * xi, omega);
    }
  });
}

long forward_sweep(ParticleState& st, const CellIndex& cells,
                   const SweepContext& ctx, bool* out_clamped) {
  if (!(ctx.h > 0))
    throw std::invalid_argument("forward_sweep: bandwidth must be positive");
  if (ctx.redraw_model)
    throw std::invalid_argument(
        "forward_sweep: per-encounter redraws need the direct algorithm");
  const double c0 = ctx.m_p * ctx.dt / (2.0 * ctx.h * std::sqrt(M_PI));
  const double inv_4h2 = 1.0 / (4.0 * ctx.h * ctx.h);
  const long n_a = static_cast<long>(st.a_pos.size());
  const long n_blocks = (n_a + kBlock - 1) / kBlock;

  // Scoring phase. Reads step-start occupancy only; per-A draws are keyed on
  // the A index, so blocks are independent.
  std::vector<std::vector<Hit>> block_hits(n_blocks);
  std::vector<std::uint8_t> block_clamp(n_blocks, 0);
  par_for_blocks(n_blocks, ctx.policy, ctx.threads, [&](long blk) {
    auto& out = block_hits[blk];
    bool clamped = false;
    const long hi = std::min(n_a, (blk + 1) * kBlock);
    for (long a = blk * kBlock; a < hi; ++a) {
      const double ax = st.a_pos[a];
      int nb[3];
      const int n_nb = cells.neighborhood(cells.cell_of(ax), nb);
      std::uint64_t draw = 0;
      for (int ci = 0; ci < n_nb; ++ci) {
        const auto& list = cells.sites_by_kf[nb[ci]];
        const std::size_t len = list.size();
        std::size_t i = 0;
        while (i < len) {
          // Envelope for the run starting at i: the list is k_f-descending,
          // so the peak probability at its head bounds every later slot.
          const double q_top = c0 * st.sites.kf[list[i]];
          if (!(q_top > 0)) break;
          std::size_t mark;
          if (q_top >= 1.0) {
            mark = i;  // envelope saturated: visit every slot directly
          } else {
            const double u = rng::uniform_open(
                rng::bits(ctx.seed, rng::Stream::forward, ctx.step, a, draw++));
            // Geometric gap under the envelope. Compare before casting: the
            // gap can exceed the list (or any integer) when q_top is tiny.
            const double g = std::floor(std::log(u) / std::log1p(-q_top));
            if (!(g < static_cast<double>(len - i))) break;
            mark = i + static_cast<std::size_t>(g);
          }
          const std::int32_t s = list[mark];
          if (!st.sites.occupied[s]) {
            const double d = min_image(ax, st.sites.pos[s], ctx.omega);
            double pa = c0 * st.sites.kf[s] * std::exp(-d * d * inv_4h2);
            if (pa > 1.0) {
              pa = 1.0;
              clamped = true;
            }
            const double env = std::min(q_top, 1.0);
            const double u2 = rng::uniform_open(
                rng::bits(ctx.seed, rng::Stream::forward, ctx.step, a, draw++));
            if (u2 * env <= pa)
              out.push_back({static_cast<std::int32_t>(a), s});
          }
          i = mark + 1;
        }
      }
    }
    block_clamp[blk] = clamped;
  });

  std::size_t total = 0;
  bool clamped = false;
  for (long b = 0; b < n_blocks; ++b) {
    total += block_hits[b].size();
    clamped = clamped || block_clamp[b];
  }
  if (out_clamped) *out_clamped = clamped;
  std::vector<Hit> hits;
  hits.reserve(total);
  for (long b = 0; b < n_blocks; ++b)
    hits.insert(hits.end(), block_hits[b].begin(), block_hits[b].end());

  std::vector<std::uint8_t> consumed(n_a, 0);
  const long n_forward = resolve_hits(st, hits, consumed, ctx.seed, ctx.step);
  compact_a(st.a_pos, consumed);
  return n_forward;
}

long forward_sweep_direct(ParticleState& st, const CellIndex& cells,
                          const SweepContext& ctx, std::size_t pair_cap,
                          bool* out_clamped) {
  if (!(ctx.h > 0))
    throw std::invalid_argument("forward_sweep: bandwidth must be positive");

  // Candidate count before allocation; a fine partition keeps this near
  // 3 * N_A * N_B / n_cells, but a coarse one can explode quadratically.
  std::size_t est = 0;
  int nb[3];
  for (std::size_t a = 0; a < st.a_pos.size(); ++a) {
    const int n_nb = cells.neighborhood(cells.cell_of(st.a_pos[a]), nb);
    for (int i = 0; i < n_nb; ++i)
      est += static_cast<std::size_t>(cells.site_begin[nb[i] + 1] -
                                      cells.site_begin[nb[i]]);
    if (est > pair_cap)
      throw std::length_error(
          "direct pair sweep: candidate list exceeds the pair cap; use the "
          "thinned algorithm or raise the cap");
  }

  auto pairs = candidate_pairs(st, cells);
  for (std::size_t i = pairs.size(); i > 1; --i) {
    const std::uint64_t b =
        rng::bits(ctx.seed, rng::Stream::shuffle, ctx.step, i - 1);
    std::swap(pairs[i - 1], pairs[rng::uniform_index(b, i)]);
  }

  KernelParams kp{ctx.h, 0.0, ctx.m_p, ctx.dt};
  bool clamped = false;
  std::vector<std::uint8_t> consumed(st.a_pos.size(), 0);
  long n_forward = 0;
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    const auto [a, s] = pairs[v];
    // A pair whose member already reacted this step is skipped without
    // spending a draw.
    if (consumed[a] || st.sites.occupied[s]) continue;
    if (ctx.redraw_model) {
      const double zeta = rng::uniform_halfopen(rng::bits(
          ctx.seed, rng::Stream::encounter_constants, ctx.step, v));
      kp.k_f = ctx.k_b * sample_khat(ctx.redraw_model->m,
                                     ctx.redraw_model->k_min, zeta);
    } else {
      kp.k_f = st.sites.kf[s];
    }
    const double d = min_image(st.a_pos[a], st.sites.pos[s], ctx.omega);
    bool cl = false;
    const double p = p_forward(d, kp, &cl);
    clamped = clamped || cl;
    const double xi = rng::uniform_open(
        rng::bits(ctx.seed, rng::Stream::pair_reference, ctx.step, v));
    if (p >= xi) {
      consumed[a] = 1;
      st.sites.occupied[s] = 1;
      st.site_c_index[s] = static_cast<std::int32_t>(st.c_slots.size());
      st.c_slots.push_back(s);
      ++n_forward;
    }
  }
  if (out_clamped) *out_clamped = clamped;
  compact_a(st.a_pos, consumed);
  return n_forward;
}

long backward_sweep(ParticleState& st, double p_b, std::uint64_t seed,
                    long step, std::size_t n_slots) {
  if (!(p_b >= 0 && p_b <= 1))
    throw std::invalid_argument(
        "backward_sweep: k_b * dt must lie in [0, 1]");
  if (n_slots > st.c_slots.size())
    throw std::invalid_argument("backward_sweep: slot range past the C list");
  if (p_b == 0 || n_slots == 0) return 0;

  // Which of the first n_slots complexes desorb. Geometric gaps between
  // successes replace one draw per slot; the marks are exactly independent
  // Bernoulli(p_b) picks.
  std::vector<std::int32_t> marks;
  if (p_b >= 1.0) {
    marks.resize(n_slots);
    for (std::size_t i = 0; i < n_slots; ++i)
      marks[i] = static_cast<std::int32_t>(i);
  } else {
    const double denom = std::log1p(-p_b);
    long cur = -1;
    std::uint64_t draw = 0;
    while (true) {
      const double u = rng::uniform_open(
          rng::bits(seed, rng::Stream::backward, step, draw++));
      const double g = std::floor(std::log(u) / denom);
      const long remaining = static_cast<long>(n_slots) - 1 - cur;
      if (!(g < static_cast<double>(remaining))) break;
      cur += 1 + static_cast<long>(g);
      marks.push_back(static_cast<std::int32_t>(cur));
    }
  }

  // Release the A particles in mark order, then close the slot gaps from the
  // back so earlier swaps never move a still-marked entry.
  for (const std::int32_t slot : marks) {
    const std::int32_t site = st.c_slots[slot];
    st.sites.occupied[site] = 0;
    st.site_c_index[site] = -1;
    st.a_pos.push_back(st.sites.pos[site]);
  }
  for (std::size_t i = marks.size(); i-- > 0;) {
    const std::int32_t slot = marks[i];
    const std::int32_t moved = st.c_slots.back();
    st.c_slots[slot] = moved;
    if (st.site_c_index[moved] >= 0) st.site_c_index[moved] = slot;
    st.c_slots.pop_back();
  }
  return static_cast<long>(marks.size());
}

Engine::Engine(const SimConfig& cfg, EngineOptions opt)
    : cfg_(cfg), opt_(opt) {
  cfg_.validate();
  if (cfg_.sites.kind == SiteModelKind::heterogeneous) {
    // Resolve the (epsilon, A_c) form once so the sweeps see a plain K_min.
    cfg_.sites.k_min = cfg_.resolved_k_min();
    cfg_.sites.k_min_direct = true;
  }
  if (cfg_.sites.redraw_per_encounter && opt_.algo != PairAlgo::direct)
    throw std::invalid_argument(
        "redraw_per_encounter requires the direct pair algorithm");
  st_ = initialize_state(cfg_);
  if (cfg_.bandwidth.variant == BandwidthVariant::fixed) {
    h_ = cfg_.bandwidth.fixed_h;
  } else {
    // Pre-first-step stand-in, also the fallback while the sample statistic
    // is degenerate: the rule of thumb evaluated for a uniform spread.
    const double n = static_cast<double>(std::max<std::size_t>(st_.n_a(), 1));
    h_ = cfg_.bandwidth.prefactor * (cfg_.omega / std::sqrt(12.0)) *
         std::pow(n, -0.2);
  }
}

double Engine::update_bandwidth() {
  if (cfg_.bandwidth.variant == BandwidthVariant::fixed) {
    h_ = cfg_.bandwidth.fixed_h;
    return h_;
  }
  double h = 0.0;
  if (cfg_.bandwidth.population == BandwidthPopulation::mobile_a) {
    h = bandwidth_or_zero(st_.a_pos, cfg_.bandwidth);
  } else {
    scratch_pop_.assign(st_.a_pos.begin(), st_.a_pos.end());
    for (std::size_t s = 0; s < st_.sites.size(); ++s)
      if (!st_.sites.occupied[s]) scratch_pop_.push_back(st_.sites.pos[s]);
    h = bandwidth_or_zero(scratch_pop_, cfg_.bandwidth);
  }
  if (h > 0) h_ = h;  // degenerate statistic: keep the previous bandwidth
  return h_;
}

const CellIndex& Engine::cells_for(double h) {
  const int n = cell_count(cfg_.omega, h);
  // The sites never move, so the whole site-side index stays valid while the
  // cell count is unchanged; h drifts like N^(-1/5), so rebuilds are rare.
  if (n != cells_.n_cells)
    cells_ = build_site_cells(st_.sites, n, cfg_.omega);
  return cells_;
}

StepReport Engine::step() {
  const long k = st_.step + 1;
  diffuse(st_.a_pos, cfg_.omega, cfg_.diffusion, cfg_.dt, cfg_.seed, k,
          opt_.policy, opt_.threads);
  StepReport rep;
  rep.h = update_bandwidth();
  const CellIndex& cells = cells_for(rep.h);
  const std::size_t n_c0 = st_.c_slots.size();

  SweepContext ctx;
  ctx.seed = cfg_.seed;
  ctx.step = k;
  ctx.h = rep.h;
  ctx.m_p = cfg_.particle_mass;
  ctx.dt = cfg_.dt;
  ctx.omega = cfg_.omega;
  ctx.policy = opt_.policy;
  ctx.threads = opt_.threads;
  ctx.k_b = cfg_.k_b;
  if (cfg_.sites.redraw_per_encounter) ctx.redraw_model = &cfg_.sites;

  bool clamped = false;
  if (opt_.algo == PairAlgo::thinned) {
    // Walk only unoccupied sites: occupied ones cannot react, and with a
    // heavy-tailed k_f law they would otherwise dominate the envelope.
    filter_free_sites(st_.sites, cells, free_cells_);
    rep.n_forward = forward_sweep(st_, free_cells_, ctx, &clamped);
  } else {
    rep.n_forward = forward_sweep_direct(st_, cells, ctx, opt_.direct_pair_cap,
                                         &clamped);
  }
  rep.n_backward = backward_sweep(st_, cfg_.k_b * cfg_.dt, cfg_.seed, k, n_c0);
  rep.clamped = clamped;
  clamp_seen_ = clamp_seen_ || clamped;
  st_.step = k;
  st_.time = cfg_.dt * static_cast<double>(k);
  return rep;
}

std::vector<TimeSeriesRecord> Engine::run() {
  std::vector<TimeSeriesRecord> out;
  out.reserve(static_cast<std::size_t>(cfg_.n_steps) + 1);
  out.push_back(concentrations(st_, cfg_));
  bool warned = false;
  for (long k = 1; k <= cfg_.n_steps; ++k) {
    const StepReport rep = step();
    if (rep.clamped && !warned) {
      warned = true;
      std::cerr << "warning: forward reaction probability clamped at 1 "
                   "(first at step "
                << k << "); lower k_f * m_p * dt or raise the bandwidth\n";
    }
    TimeSeriesRecord r = concentrations(st_, cfg_);
    r.h_opt = rep.h;
    r.n_forward = rep.n_forward;
    r.n_backward = rep.n_backward;
    out.push_back(r);
  }
  return out;
}

}  // namespace kdesorb
