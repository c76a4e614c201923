#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kdesorb/config.hpp"
#include "kdesorb/state.hpp"

namespace kdesorb {

// One isotherm abscissa: initial A concentration plus how many independent
// replicates to average. Low concentrations need more replicates because so
// few particles survive to equilibrium.
struct SweepRow {
  double a0 = 0.0;
  int replicates = 1;
};

struct SweepSpec {
  SimConfig base;              // conc_A0 is overridden per row
  std::vector<SweepRow> rows;
  long window = 100;           // equilibrium average over the last N steps
  int workers = 1;

  void validate() const;  // throws std::invalid_argument
};

// Outcome of one replicate. The full time series is only populated for the
// on_replicate callback and dropped afterwards to bound memory.
struct ReplicateResult {
  int row = 0;
  int rep = 0;
  double a0 = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  EquilibriumStats eq;
  std::vector<TimeSeriesRecord> series;
};

// Aggregate over the replicates of one row that completed.
struct SweepRowResult {
  double a0 = 0.0;
  double mean_A = 0.0;  // equilibrium aqueous concentration, replicate mean
  double mean_C = 0.0;
  double std_C = 0.0;  // sample std over replicates; 0 for a single one
  int n_rep = 0;       // completed replicates
  int n_failed = 0;
};

struct SweepResult {
  std::vector<SweepRowResult> rows;
};

// Runs every (row, replicate) once on a worker pool. Replicate seeds are
// derived from base.seed and the (row, rep) index, and aggregation order is
// fixed, so the result is identical for any worker count. A replicate that
// throws is recorded as failed and excluded from its row's aggregate; the
// sweep itself keeps going. on_replicate (optional) is called once per
// finished replicate under a lock, with the full series attached.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const ReplicateResult&)>&
                          on_replicate = nullptr);

}  // namespace kdesorb
