#pragma once
#include <cstdint>
#include <vector>

#include "kdesorb/cells.hpp"
#include "kdesorb/config.hpp"
#include "kdesorb/state.hpp"

namespace kdesorb {

enum class ExecutionPolicy {
  serial,
  openmp,  // parallel candidate scoring; resolution stays serial
};

// Forward-sweep algorithm. Both sample the same per-pair Bernoulli law;
// `thinned` walks each A's k_f-sorted neighborhood with geometric gap draws
// under the peak-probability envelope, `direct` scores every candidate pair
// one by one. direct is the readable reference the tests compare against
// and the only mode supporting per-encounter constant redraws.
enum class PairAlgo { thinned, direct };

struct EngineOptions {
  ExecutionPolicy policy = ExecutionPolicy::serial;
  PairAlgo algo = PairAlgo::thinned;
  int threads = 0;  // 0 = OpenMP runtime default; ignored for serial
  // direct enumerates its candidate list up front; refuse absurd sizes
  // instead of silently exhausting memory.
  std::size_t direct_pair_cap = 50'000'000;
};

struct StepReport {
  long n_forward = 0;
  long n_backward = 0;
  double h = 0.0;
  bool clamped = false;  // some pair probability hit the min(1, .) clamp
};

// Everything a single sweep needs besides the state. Bundled so the sweeps
// stay free functions the tests can drive on crafted states.
struct SweepContext {
  std::uint64_t seed = 0;
  long step = 0;
  double h = 0.0;
  double m_p = 0.0;
  double dt = 0.0;
  double omega = 0.0;
  ExecutionPolicy policy = ExecutionPolicy::serial;
  int threads = 0;
  // direct algorithm only: redraw the pair constant on every encounter
  const SiteModel* redraw_model = nullptr;
  double k_b = 0.0;  // scales redrawn constants
};

// One Brownian step for every A particle, wrapped back into [0, omega).
void diffuse(std::vector<double>& a_pos, double omega, double diffusion,
             double dt, std::uint64_t seed, long step, ExecutionPolicy policy,
             int threads);

// Envelope-thinned forward sweep: adsorbs in place (flipping site occupancy,
// appending to c_slots, removing consumed A) and returns the reaction count.
// Candidate scoring may run in parallel; resolution follows the seeded
// shuffle of the hit list, so results are identical for any thread count.
long forward_sweep(ParticleState& st, const CellIndex& cells,
                   const SweepContext& ctx, bool* out_clamped = nullptr);

// Reference forward sweep: enumerate all candidate pairs, shuffle them, then
// score sequentially with one draw per still-live pair. Distributionally
// equivalent to forward_sweep; used by tests and the redraw mode. Throws
// std::length_error past pair_cap.
long forward_sweep_direct(ParticleState& st, const CellIndex& cells,
                          const SweepContext& ctx, std::size_t pair_cap,
                          bool* out_clamped = nullptr);

// Desorption sweep over the first n_slots entries of c_slots (the complexes
// that existed when the step began): each desorbs with probability
// k_b * dt, releasing an A at the site position. Returns the count.
long backward_sweep(ParticleState& st, double p_b, std::uint64_t seed,
                    long step, std::size_t n_slots);

class Engine {
 public:
  // Validates the config; throws std::invalid_argument on a bad one or on
  // redraw_per_encounter with the thinned algorithm.
  explicit Engine(const SimConfig& cfg, EngineOptions opt = {});

  const SimConfig& config() const { return cfg_; }
  const ParticleState& state() const { return st_; }
  ParticleState& mutable_state() { return st_; }  // for crafted test states
  double current_bandwidth() const { return h_; }

  // Advances one step: diffuse, bandwidth update, cell rebuild if needed,
  // forward sweep, backward sweep.
  StepReport step();

  // Runs all cfg.n_steps steps from the initial state, recording every step
  // (element k of the result is the state after step k; element 0 is the
  // initial state). Warns on stderr once per run if the probability clamp
  // ever engages.
  std::vector<TimeSeriesRecord> run();

 private:
  double update_bandwidth();
  const CellIndex& cells_for(double h);

  SimConfig cfg_;
  EngineOptions opt_;
  ParticleState st_;
  double h_ = 0.0;  // falls back to the previous value on degenerate stats
  CellIndex cells_;
  CellIndex free_cells_;  // per-step unoccupied view for the thinned walk
  bool clamp_seen_ = false;
  std::vector<double> scratch_pop_;  // a_plus_b bandwidth population
};

}  // namespace kdesorb
