#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kdesorb/engine.hpp"

using namespace kdesorb;

// Times the serial and OpenMP execution policies on the same adsorption
// problem and verifies they produce identical trajectories. On a single
// hardware thread the parallel build only shows its overhead; the point of
// the comparison is that the answer never changes, only the wall time.

namespace {

SimConfig bench_config(double a0, long steps, std::uint64_t seed) {
  SimConfig cfg;
  cfg.omega = 200;
  cfg.diffusion = 1e-2;
  cfg.dt = 1e-2;
  cfg.n_steps = steps;
  cfg.particle_mass = 1;
  cfg.conc_A0 = a0;
  cfg.conc_B0 = 200;
  cfg.conc_C0 = 1;
  cfg.k_b = 0.1;
  cfg.sites.kind = SiteModelKind::homogeneous;
  cfg.sites.k_f = 0.5;
  cfg.seed = seed;
  return cfg;
}

double run_once(const SimConfig& cfg, EngineOptions opt,
                std::vector<TimeSeriesRecord>& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Engine eng(cfg, opt);
  out = eng.run();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

bool same_series(const std::vector<TimeSeriesRecord>& a,
                 const std::vector<TimeSeriesRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].conc_A != b[i].conc_A || a[i].conc_C != b[i].conc_C ||
        a[i].h_opt != b[i].h_opt || a[i].n_forward != b[i].n_forward ||
        a[i].n_backward != b[i].n_backward)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  double a0 = 100;
  long steps = 400;
  int threads = 0;
  std::uint64_t seed = 7;
  CLI::App app{"serial vs OpenMP engine benchmark"};
  app.add_option("--a0", a0, "initial A concentration (default 100)");
  app.add_option("--steps", steps, "steps per run (default 400)");
  app.add_option("--threads", threads, "OpenMP threads (default: runtime)");
  app.add_option("--seed", seed, "seed (default 7)");
  CLI11_PARSE(app, argc, argv);

  const SimConfig cfg = bench_config(a0, steps, seed);
  std::printf("A0=%g B0=%g steps=%ld particles=%ld\n", cfg.conc_A0,
              cfg.conc_B0, steps,
              particle_count(cfg.conc_A0 + cfg.conc_B0 + cfg.conc_C0,
                             cfg.omega, cfg.particle_mass));

  std::vector<TimeSeriesRecord> serial_series, omp_series;
  const double t_serial =
      run_once(cfg, {ExecutionPolicy::serial, PairAlgo::thinned, 0},
               serial_series);
  std::printf("serial : %8.3f s  (%.3f ms/step)\n", t_serial,
              1e3 * t_serial / steps);

  EngineOptions omp_opt{ExecutionPolicy::openmp, PairAlgo::thinned, threads};
  const double t_omp = run_once(cfg, omp_opt, omp_series);
  std::printf("openmp : %8.3f s  (%.3f ms/step)  speedup x%.2f\n", t_omp,
              1e3 * t_omp / steps, t_serial / t_omp);

  if (!same_series(serial_series, omp_series)) {
    std::printf("FAIL: serial and OpenMP trajectories differ\n");
    return 1;
  }
  std::printf("trajectories identical\n");
  return 0;
}
