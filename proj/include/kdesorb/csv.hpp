#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "kdesorb/state.hpp"
#include "kdesorb/sweep.hpp"

namespace kdesorb {

// Shortest round-trip decimal form of v (via std::to_chars), so equal doubles
// always serialize to equal bytes. NaN prints as "nan".
std::string format_double(double v);

// Time-series CSV with header
//   step,t,conc_A,conc_B,conc_C,ratio,h_opt,n_forward,n_backward
// The series holds every step (element k = step k). Rows written: step 0
// only when it is the whole series, otherwise every step divisible by
// record_every plus the final step. An undefined ratio prints as nan.
void write_run_csv(std::ostream& os,
                   const std::vector<TimeSeriesRecord>& series,
                   long record_every);

// Isotherm sweep CSV with header A0,conc_A,conc_C,std_C,n_rep. A row whose
// replicates all failed is kept as a marker line with nan values and
// n_rep 0, so a partial sweep is still a complete file.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace kdesorb
