#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kdesorb/config_file.hpp"
#include "kdesorb/csv.hpp"
#include "kdesorb/engine.hpp"
#include "kdesorb/isotherm.hpp"
#include "kdesorb/site_law.hpp"
#include "kdesorb/sweep.hpp"

namespace fs = std::filesystem;
using namespace kdesorb;

namespace {

constexpr int kExitUsage = 2;    // bad flags or config
constexpr int kExitRuntime = 3;  // a simulation or I/O failure

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  long seed = 0;
  bool seed_set = false;
  long record_every = 0;  // 0 = keep the config's value
  int workers = 1;
  std::string algo = "thinned";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_workers) {
  cmd->add_option("--config", f.config_path, "simulation config file (INI)")
      ->required();
  cmd->add_option("--out", f.out_dir, "output directory (default: out)");
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_option("--record-every", f.record_every,
                  "override the config's CSV row thinning");
  if (with_workers)
    cmd->add_option("--workers", f.workers,
                    "parallelism: replicate workers for sweeps, OpenMP "
                    "threads for a single run");
  cmd->add_option("--algo", f.algo,
                  "forward sweep algorithm: thinned (default) or direct")
      ->check(CLI::IsMember({"thinned", "direct"}));
}

SimConfig apply_overrides(const LoadedConfig& lc, const CLI::App* cmd,
                          const CommonFlags& f) {
  SimConfig cfg = lc.sim;
  if (cmd->count("--seed")) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (cmd->count("--record-every")) {
    if (f.record_every < 1)
      throw ConfigError("--record-every must be at least 1");
    cfg.record_every = f.record_every;
  }
  return cfg;
}

EngineOptions engine_options(const CommonFlags& f, int threads) {
  EngineOptions opt;
  opt.algo = f.algo == "direct" ? PairAlgo::direct : PairAlgo::thinned;
  if (threads > 1) {
    opt.policy = ExecutionPolicy::openmp;
    opt.threads = threads;
  }
  return opt;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return os;
}

void finish_output(std::ofstream& os, const fs::path& p) {
  os.flush();
  if (!os) throw std::runtime_error("failed while writing " + p.string());
}

// ---------------------------------------------------------------- run ----

void emit_ratio_plot(const fs::path& dir, const SimConfig& cfg) {
  const fs::path p = dir / "plot_ratio.gp";
  std::ofstream os = open_output(p);
  os << "# gnuplot -persist plot_ratio.gp\n"
     << "set datafile separator \",\"\n"
     << "set xlabel \"t\"\n"
     << "set ylabel \"[C] / ([A][B])\"\n"
     << "set key bottom right\n";
  if (cfg.sites.kind == SiteModelKind::homogeneous && cfg.k_b > 0) {
    const double keq = cfg.sites.k_f / cfg.k_b;
    os << "keq = " << format_double(keq) << "\n"
       << "plot \"run.csv\" skip 1 using 2:6 with lines title \"simulation\", \\\n"
       << "     keq with lines dashtype 2 title \"k_f / k_b\"\n";
  } else {
    os << "plot \"run.csv\" skip 1 using 2:6 with lines title \"simulation\"\n";
  }
  finish_output(os, p);
}

int do_run(const CLI::App* cmd, const CommonFlags& f) {
  const LoadedConfig lc = load_config_file(f.config_path);
  const SimConfig cfg = apply_overrides(lc, cmd, f);
  Engine eng(cfg, engine_options(f, f.workers));
  const std::vector<TimeSeriesRecord> series = eng.run();

  fs::create_directories(f.out_dir);
  const fs::path csv_path = fs::path(f.out_dir) / "run.csv";
  std::ofstream os = open_output(csv_path);
  write_run_csv(os, series, cfg.record_every);
  finish_output(os, csv_path);
  emit_ratio_plot(f.out_dir, cfg);

  const TimeSeriesRecord& last = series.back();
  std::cout << "wrote " << csv_path.string() << " (" << series.back().step
            << " steps); final conc_A=" << format_double(last.conc_A)
            << " conc_C=" << format_double(last.conc_C) << "\n";
  return 0;
}

// -------------------------------------------------------------- sweeps ----

std::string replicate_csv_name(int row, int rep) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "row%02d_rep%03d.csv", row, rep);
  return buf;
}

struct SweepFiles {
  fs::path dir;
  long record_every = 1;
  int failures = 0;
};

SweepResult run_sweep_with_files(const SweepSpec& spec, SweepFiles& files) {
  fs::create_directories(files.dir / "runs");
  auto on_rep = [&](const ReplicateResult& rr) {
    if (rr.failed) {
      ++files.failures;
      std::cerr << "replicate row " << rr.row << " rep " << rr.rep
                << " (A0=" << format_double(rr.a0) << ") failed: " << rr.error
                << "\n";
      return;
    }
    const fs::path p =
        files.dir / "runs" / replicate_csv_name(rr.row, rr.rep);
    std::ofstream os = open_output(p);
    write_run_csv(os, rr.series, files.record_every);
    finish_output(os, p);
  };
  return run_sweep(spec, on_rep);
}

void emit_langmuir_outputs(const fs::path& dir, const SweepSpec& spec,
                           const SweepResult& res) {
  const double capacity = spec.base.conc_B0 + spec.base.conc_C0;
  std::vector<double> as, cs;
  for (const SweepRowResult& row : res.rows) {
    if (row.n_rep > 0 && row.mean_A > 0 && row.mean_C > 0) {
      as.push_back(row.mean_A);
      cs.push_back(row.mean_C);
    }
  }
  const double keq_theory = spec.base.sites.k_f / spec.base.k_b;
  double keq_fit = std::numeric_limits<double>::quiet_NaN();
  if (!as.empty()) keq_fit = fit_langmuir_keq(as, cs, capacity);

  {
    const fs::path p = dir / "fit.txt";
    std::ofstream os = open_output(p);
    os << "isotherm = langmuir\n"
       << "points = " << as.size() << "\n"
       << "B0 = " << format_double(capacity) << "\n"
       << "K_eq_fit = " << format_double(keq_fit) << "\n"
       << "K_eq_theory = " << format_double(keq_theory) << "\n"
       << "rel_error = "
       << format_double(keq_fit / keq_theory - 1.0) << "\n";
    finish_output(os, p);
  }
  {
    const fs::path p = dir / "plot_isotherm.gp";
    std::ofstream os = open_output(p);
    os << "# gnuplot -persist plot_isotherm.gp\n"
       << "set datafile separator \",\"\n"
       << "set xlabel \"[A] at equilibrium\"\n"
       << "set ylabel \"[C] at equilibrium\"\n"
       << "set key bottom right\n"
       << "b0 = " << format_double(capacity) << "\n"
       << "k = " << format_double(keq_fit) << "\n"
       << "f(x) = b0 * k * x / (1 + k * x)\n"
       << "plot \"sweep.csv\" skip 1 using 2:3:4 with yerrorbars "
          "title \"simulation\", \\\n"
       << "     f(x) with lines title \"Langmuir, fitted K_{eq}\"\n";
    finish_output(os, p);
  }
}

void emit_freundlich_outputs(const fs::path& dir, const SweepSpec& spec,
                             const SweepResult& res, double fit_epsilon) {
  const SiteModel& sm = spec.base.sites;
  const double capacity = spec.base.conc_B0 + spec.base.conc_C0;
  const double k_min = spec.base.resolved_k_min();
  const double eps = sm.k_min_direct ? fit_epsilon : sm.epsilon;
  const double a_c = critical_concentration(eps, sm.m, k_min);
  const double k_theory = freundlich_coefficient(sm.m, k_min, capacity);

  // Fit only the window where the power law should hold.
  std::vector<double> as, cs;
  for (const SweepRowResult& row : res.rows) {
    if (row.n_rep > 0 && row.mean_A > 0 && row.mean_C > 0 &&
        row.mean_A <= a_c) {
      as.push_back(row.mean_A);
      cs.push_back(row.mean_C);
    }
  }
  LogLogFit fit;
  bool fitted = false;
  if (as.size() >= 2) {
    fit = fit_loglog(as, cs);
    fitted = true;
  }

  {
    const fs::path p = dir / "fit.txt";
    std::ofstream os = open_output(p);
    os << "isotherm = freundlich\n"
       << "m_config = " << format_double(sm.m) << "\n"
       << "K_min = " << format_double(k_min) << "\n"
       << "deviation_epsilon = " << format_double(eps) << "\n"
       << "A_c = " << format_double(a_c) << "\n"
       << "points_in_window = " << as.size() << "\n";
    if (fitted) {
      os << "m_fit = " << format_double(fit.slope) << "\n"
         << "logK_fit = " << format_double(fit.intercept) << "\n"
         << "K_fit = " << format_double(std::exp(fit.intercept)) << "\n"
         << "K_theory = " << format_double(k_theory) << "\n"
         << "rms_residual = " << format_double(fit.rms_residual) << "\n";
    } else {
      os << "m_fit = nan  # fewer than two rows below A_c\n"
         << "K_theory = " << format_double(k_theory) << "\n";
    }
    finish_output(os, p);
  }

  // Reference curves for the plot: the pure power law and the full isotherm.
  double a_lo = a_c, a_hi = a_c;
  for (const SweepRowResult& row : res.rows) {
    if (row.n_rep > 0 && row.mean_A > 0) {
      a_lo = std::min(a_lo, row.mean_A);
      a_hi = std::max(a_hi, row.mean_A);
    }
  }
  {
    const fs::path p = dir / "theory.csv";
    std::ofstream os = open_output(p);
    os << "A,freundlich,combined\n";
    const int n = 200;
    const double lo = std::log(a_lo / 2), hi = std::log(a_hi * 2);
    for (int i = 0; i <= n; ++i) {
      const double a = std::exp(lo + (hi - lo) * i / n);
      os << format_double(a) << ','
         << format_double(freundlich(a, k_theory, sm.m)) << ','
         << format_double(combined_isotherm(a, sm.m, k_min, capacity)) << '\n';
    }
    finish_output(os, p);
  }
  {
    const fs::path p = dir / "plot_isotherm.gp";
    std::ofstream os = open_output(p);
    os << "# gnuplot -persist plot_isotherm.gp\n"
       << "set datafile separator \",\"\n"
       << "set logscale xy\n"
       << "set xlabel \"[A] at equilibrium\"\n"
       << "set ylabel \"[C] at equilibrium\"\n"
       << "set key bottom right\n"
       << "b0 = " << format_double(capacity) << "\n"
       << "plot \"sweep.csv\" skip 1 using 2:3:4 with yerrorbars "
          "title \"simulation\", \\\n"
       << "     \"theory.csv\" skip 1 using 1:2 with lines "
          "title \"Freundlich limit\", \\\n"
       << "     \"theory.csv\" skip 1 using 1:3 with lines "
          "title \"site-mixture isotherm\", \\\n"
       << "     b0 with lines dashtype 2 title \"B_0\"\n";
    finish_output(os, p);
  }
}

int do_sweep(const CLI::App* cmd, const CommonFlags& f, bool freundlich_mode) {
  const LoadedConfig lc = load_config_file(f.config_path);
  if (!lc.has_sweep)
    throw ConfigError(f.config_path + ": this command needs a [sweep] section");
  const bool het = lc.sim.sites.kind == SiteModelKind::heterogeneous;
  if (freundlich_mode && !het)
    throw ConfigError(f.config_path +
                      ": sweep-freundlich needs a heterogeneous site model");
  if (!freundlich_mode && het)
    throw ConfigError(f.config_path +
                      ": sweep-langmuir needs a homogeneous site model");

  SweepSpec spec;
  spec.base = apply_overrides(lc, cmd, f);
  spec.rows = lc.sweep_rows;
  spec.window = lc.sweep_window;
  spec.workers = f.workers;
  if (f.algo == "direct")
    throw ConfigError("--algo direct is only supported by `run`");

  SweepFiles files{f.out_dir, spec.base.record_every, 0};
  const SweepResult res = run_sweep_with_files(spec, files);

  const fs::path csv_path = fs::path(f.out_dir) / "sweep.csv";
  std::ofstream os = open_output(csv_path);
  write_sweep_csv(os, res);
  finish_output(os, csv_path);

  if (freundlich_mode)
    emit_freundlich_outputs(f.out_dir, spec, res, 0.1);
  else
    emit_langmuir_outputs(f.out_dir, spec, res);

  std::cout << "wrote " << csv_path.string() << " (" << res.rows.size()
            << " rows";
  if (files.failures > 0) std::cout << ", " << files.failures << " failed replicates";
  std::cout << ")\n";
  return files.failures == 0 ? 0 : kExitRuntime;
}

// ------------------------------------------------------------ isotherm ----

struct IsothermFlags {
  std::string model;
  std::string out_dir = "out";
  double keq = 0, k = 0, m = 0, k_min = 0, b0 = 0;
  double a_min = 0, a_max = 0;
  int points = 100;
  bool linear = false;
};

int do_isotherm(const CLI::App* cmd, const IsothermFlags& f) {
  if (!(f.a_min > 0) || !(f.a_max >= f.a_min))
    throw ConfigError("isotherm: need 0 < --amin <= --amax");
  if (f.points < 2) throw ConfigError("isotherm: --points must be at least 2");

  auto need = [&](const char* flag) {
    if (!cmd->count(flag))
      throw ConfigError(std::string("isotherm: ") + f.model + " needs " + flag);
  };
  std::function<double(double)> curve;
  if (f.model == "langmuir") {
    need("--keq");
    need("--b0");
    curve = [&](double a) { return langmuir(a, f.keq, f.b0); };
  } else if (f.model == "freundlich") {
    need("--k");
    need("--m");
    curve = [&](double a) { return freundlich(a, f.k, f.m); };
  } else {
    need("--m");
    need("--kmin");
    need("--b0");
    curve = [&](double a) { return combined_isotherm(a, f.m, f.k_min, f.b0); };
  }

  fs::create_directories(f.out_dir);
  const fs::path p = fs::path(f.out_dir) / "isotherm.csv";
  std::ofstream os = open_output(p);
  os << "A,C\n";
  for (int i = 0; i < f.points; ++i) {
    const double s = static_cast<double>(i) / (f.points - 1);
    const double a = f.linear
                         ? f.a_min + (f.a_max - f.a_min) * s
                         : std::exp(std::log(f.a_min) +
                                    (std::log(f.a_max) - std::log(f.a_min)) * s);
    os << format_double(a) << ',' << format_double(curve(a)) << '\n';
  }
  finish_output(os, p);
  std::cout << "wrote " << p.string() << " (" << f.points << " points)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "particle-tracking simulator for nonlinear adsorption: microscopic "
      "A + B <-> C kinetics with kernel-density reaction ranges"};
  app.require_subcommand(1);

  CommonFlags run_f, lang_f, freu_f;
  CLI::App* run = app.add_subcommand("run", "one simulation, time-series CSV");
  add_common(run, run_f, true);
  CLI::App* lang = app.add_subcommand(
      "sweep-langmuir", "isotherm sweep over A0 on a homogeneous surface");
  add_common(lang, lang_f, true);
  CLI::App* freu = app.add_subcommand(
      "sweep-freundlich", "isotherm sweep over A0 on a heterogeneous surface");
  add_common(freu, freu_f, true);

  IsothermFlags iso_f;
  CLI::App* iso = app.add_subcommand(
      "isotherm", "tabulate a closed-form isotherm, no simulation");
  iso->add_option("--model", iso_f.model, "langmuir, freundlich or combined")
      ->required()
      ->check(CLI::IsMember({"langmuir", "freundlich", "combined"}));
  iso->add_option("--out", iso_f.out_dir, "output directory (default: out)");
  iso->add_option("--keq", iso_f.keq, "Langmuir equilibrium constant");
  iso->add_option("--k", iso_f.k, "Freundlich coefficient");
  iso->add_option("--m", iso_f.m, "power-law exponent");
  iso->add_option("--kmin", iso_f.k_min, "site-constant lower bound");
  iso->add_option("--b0", iso_f.b0, "site capacity");
  iso->add_option("--amin", iso_f.a_min, "lowest concentration")->required();
  iso->add_option("--amax", iso_f.a_max, "highest concentration")->required();
  iso->add_option("--points", iso_f.points, "grid size (default 100)");
  iso->add_flag("--linear", iso_f.linear,
                "linear grid spacing (default: logarithmic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return do_run(run, run_f);
    if (*lang) return do_sweep(lang, lang_f, false);
    if (*freu) return do_sweep(freu, freu_f, true);
    return do_isotherm(iso, iso_f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
