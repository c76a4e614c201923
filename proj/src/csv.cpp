#include "kdesorb/csv.hpp"

#include <charconv>
#include <cmath>

namespace kdesorb {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";  // normalize the sign bit away
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void write_record(std::ostream& os, const TimeSeriesRecord& r) {
  os << r.step << ',' << format_double(r.t) << ',' << format_double(r.conc_A)
     << ',' << format_double(r.conc_B) << ',' << format_double(r.conc_C)
     << ',' << format_double(r.ratio) << ',' << format_double(r.h_opt) << ','
     << r.n_forward << ',' << r.n_backward << '\n';
}

}  // namespace

void write_run_csv(std::ostream& os,
                   const std::vector<TimeSeriesRecord>& series,
                   long record_every) {
  os << "step,t,conc_A,conc_B,conc_C,ratio,h_opt,n_forward,n_backward\n";
  if (series.empty()) return;
  const long last = static_cast<long>(series.size()) - 1;
  if (last == 0) {
    write_record(os, series[0]);
    return;
  }
  for (long k = 1; k <= last; ++k) {
    if (k % record_every == 0 || k == last) write_record(os, series[k]);
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "A0,conc_A,conc_C,std_C,n_rep\n";
  for (const SweepRowResult& row : result.rows) {
    os << format_double(row.a0) << ',' << format_double(row.mean_A) << ','
       << format_double(row.mean_C) << ',' << format_double(row.std_C) << ','
       << row.n_rep << '\n';
  }
}

}  // namespace kdesorb
