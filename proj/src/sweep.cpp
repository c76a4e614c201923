#include "kdesorb/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "kdesorb/engine.hpp"
#include "kdesorb/rng.hpp"

namespace kdesorb {

void SweepSpec::validate() const {
  base.validate();
  if (rows.empty()) throw std::invalid_argument("sweep: no rows");
  for (const SweepRow& r : rows) {
    if (!(r.a0 > 0) || !std::isfinite(r.a0))
      throw std::invalid_argument("sweep: row A0 must be positive and finite");
    if (r.replicates < 1)
      throw std::invalid_argument("sweep: replicates must be at least 1");
  }
  if (window < 1) throw std::invalid_argument("sweep: window must be positive");
  if (window > base.n_steps + 1)
    throw std::invalid_argument(
        "sweep: averaging window longer than the time series");
  if (workers < 1) throw std::invalid_argument("sweep: workers must be at least 1");
}

SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const ReplicateResult&)>&
                          on_replicate) {
  spec.validate();

  struct Job {
    int row;
    int rep;
  };
  std::vector<Job> jobs;
  for (int r = 0; r < static_cast<int>(spec.rows.size()); ++r)
    for (int k = 0; k < spec.rows[r].replicates; ++k) jobs.push_back({r, k});
  // Expensive rows (more particles) first, so the pool drains evenly.
  std::stable_sort(jobs.begin(), jobs.end(), [&](const Job& a, const Job& b) {
    return spec.rows[a.row].a0 > spec.rows[b.row].a0;
  });

  std::vector<std::vector<ReplicateResult>> done(spec.rows.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r)
    done[r].resize(spec.rows[r].replicates);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!abort.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job job = jobs[i];
      ReplicateResult rr;
      rr.row = job.row;
      rr.rep = job.rep;
      rr.a0 = spec.rows[job.row].a0;
      rr.seed = rng::bits(spec.base.seed, rng::Stream::sweep, job.row, job.rep);
      try {
        SimConfig cfg = spec.base;
        cfg.conc_A0 = rr.a0;
        cfg.seed = rr.seed;
        Engine eng(cfg);
        rr.series = eng.run();
        rr.eq = equilibrium_average(rr.series, spec.window);
      } catch (const std::exception& e) {
        rr.failed = true;
        rr.error = e.what();
        rr.series.clear();
      }
      try {
        if (on_replicate) {
          std::lock_guard<std::mutex> lock(mu);
          on_replicate(rr);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
        return;
      }
      rr.series.clear();  // only the callback needs the full series
      rr.series.shrink_to_fit();
      done[job.row][job.rep] = std::move(rr);
    }
  };

  const int n_workers =
      std::min<std::size_t>(spec.workers, jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepResult out;
  out.rows.resize(spec.rows.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    SweepRowResult& row = out.rows[r];
    row.a0 = spec.rows[r].a0;
    double sum_a = 0, sum_c = 0;
    std::vector<double> cs;
    for (const ReplicateResult& rr : done[r]) {
      if (rr.failed) {
        ++row.n_failed;
        continue;
      }
      sum_a += rr.eq.mean_A;
      sum_c += rr.eq.mean_C;
      cs.push_back(rr.eq.mean_C);
    }
    row.n_rep = static_cast<int>(cs.size());
    if (row.n_rep == 0) {
      row.mean_A = row.mean_C = row.std_C = nan;
      continue;
    }
    row.mean_A = sum_a / row.n_rep;
    row.mean_C = sum_c / row.n_rep;
    double ss = 0;
    for (double c : cs) ss += (c - row.mean_C) * (c - row.mean_C);
    row.std_C = row.n_rep > 1 ? std::sqrt(ss / (row.n_rep - 1)) : 0.0;
  }
  return out;
}

}  // namespace kdesorb
