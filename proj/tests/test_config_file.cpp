#include <fstream>
#include <string>

#include "doctest.h"
#include "kdesorb/config_file.hpp"

using namespace kdesorb;

namespace {

const char* kMinimal = R"(
[sim]
omega = 100
diffusion = 1e-2
dt = 1e-2
steps = 50
particle_mass = 1
k_b = 0.1
conc_b0 = 40

[sites]
model = homogeneous
k_f = 0.5
)";

void expect_error(const std::string& text, const std::string& needle) {
  try {
    parse_config(text, "test.ini");
    FAIL("expected ConfigError containing '", needle, "'");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    INFO("message: ", what);
    CHECK(what.find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("a full config parses with every field in place") {
  const std::string text = R"(# isotherm experiment
[sim]
omega = 200
diffusion = 1e-2
dt = 1e-2
steps = 400
particle_mass = 1
k_b = 0.1
conc_a0 = 200   ; overridden per sweep row
conc_b0 = 200
conc_c0 = 1
seed = 42
record_every = 5

[sites]
model = heterogeneous
m = 0.5
epsilon = 0.1
a_c = 0.3

[bandwidth]
rule = rule_of_thumb
prefactor = 1.2
population = a_plus_b

[sweep]
window = 50
rows = 40x8, 50, 60x2
)";
  const LoadedConfig lc = parse_config(text, "full.ini");
  const SimConfig& sim = lc.sim;
  CHECK(sim.omega == 200.0);
  CHECK(sim.diffusion == 1e-2);
  CHECK(sim.dt == 1e-2);
  CHECK(sim.n_steps == 400);
  CHECK(sim.particle_mass == 1.0);
  CHECK(sim.k_b == 0.1);
  CHECK(sim.conc_A0 == 200.0);
  CHECK(sim.conc_B0 == 200.0);
  CHECK(sim.conc_C0 == 1.0);
  CHECK(sim.seed == 42);
  CHECK(sim.record_every == 5);
  CHECK(sim.sites.kind == SiteModelKind::heterogeneous);
  CHECK(sim.sites.m == 0.5);
  CHECK_FALSE(sim.sites.k_min_direct);
  CHECK(sim.sites.epsilon == 0.1);
  CHECK(sim.sites.A_c == 0.3);
  CHECK_FALSE(sim.sites.redraw_per_encounter);
  CHECK(sim.bandwidth.variant == BandwidthVariant::rule_of_thumb);
  CHECK(sim.bandwidth.prefactor == 1.2);
  CHECK(sim.bandwidth.population == BandwidthPopulation::a_plus_b);
  REQUIRE(lc.has_sweep);
  CHECK(lc.sweep_window == 50);
  REQUIRE(lc.sweep_rows.size() == 3);
  CHECK(lc.sweep_rows[0].a0 == 40.0);
  CHECK(lc.sweep_rows[0].replicates == 8);
  CHECK(lc.sweep_rows[1].a0 == 50.0);
  CHECK(lc.sweep_rows[1].replicates == 1);
  CHECK(lc.sweep_rows[2].a0 == 60.0);
  CHECK(lc.sweep_rows[2].replicates == 2);
}

TEST_CASE("omitted sections and keys fall back to defaults") {
  const LoadedConfig lc = parse_config(kMinimal, "min.ini");
  CHECK(lc.sim.conc_A0 == 0.0);
  CHECK(lc.sim.conc_C0 == 0.0);
  CHECK(lc.sim.seed == 1);
  CHECK(lc.sim.record_every == 1);
  CHECK(lc.sim.sites.kind == SiteModelKind::homogeneous);
  CHECK(lc.sim.sites.k_f == 0.5);
  CHECK(lc.sim.bandwidth.variant == BandwidthVariant::rule_of_thumb);
  CHECK(lc.sim.bandwidth.prefactor == 1.06);
  CHECK(lc.sim.bandwidth.population == BandwidthPopulation::mobile_a);
  CHECK_FALSE(lc.has_sweep);
  CHECK(lc.sweep_rows.empty());
}

TEST_CASE("fixed bandwidth and direct k_min parse") {
  const std::string text = std::string(kMinimal) + R"(
[bandwidth]
rule = fixed
h = 0.7
)";
  // swap in a heterogeneous site model with a direct lower bound
  std::string het = text;
  het.replace(het.find("model = homogeneous\nk_f = 0.5"),
              std::string("model = homogeneous\nk_f = 0.5").size(),
              "model = heterogeneous\nm = 0.3\nk_min = 0.2\n"
              "redraw_per_encounter = yes");
  const LoadedConfig lc = parse_config(het, "het.ini");
  CHECK(lc.sim.bandwidth.variant == BandwidthVariant::fixed);
  CHECK(lc.sim.bandwidth.fixed_h == 0.7);
  CHECK(lc.sim.sites.kind == SiteModelKind::heterogeneous);
  CHECK(lc.sim.sites.k_min_direct);
  CHECK(lc.sim.sites.k_min == 0.2);
  CHECK(lc.sim.sites.redraw_per_encounter);
}

TEST_CASE("a0 grids expand inclusively") {
  const std::string text = std::string(kMinimal) + R"(
[sweep]
a0_from = 40
a0_to = 250
a0_step = 10
replicates = 3
)";
  const LoadedConfig lc = parse_config(text, "grid.ini");
  REQUIRE(lc.has_sweep);
  REQUIRE(lc.sweep_rows.size() == 22);
  CHECK(lc.sweep_rows.front().a0 == 40.0);
  CHECK(lc.sweep_rows.back().a0 == 250.0);
  for (const auto& row : lc.sweep_rows) CHECK(row.replicates == 3);

  // fractional steps must not lose the endpoint to rounding
  const std::string frac = std::string(kMinimal) + R"(
[sweep]
a0_from = 0.1
a0_to = 0.5
a0_step = 0.1
)";
  const LoadedConfig lf = parse_config(frac, "frac.ini");
  REQUIRE(lf.sweep_rows.size() == 5);
  CHECK(lf.sweep_rows.back().a0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("parse failures carry the source name and line") {
  expect_error("[simx]\n", "unknown section");
  expect_error("[sim\nomega = 1\n", "malformed section header");
  expect_error("omega = 1\n", "key before any [section]");
  expect_error("[sim]\nomega\n", "expected 'key = value'");
  expect_error("[sim]\nomega =\n", "expected 'key = value'");

  std::string dup = kMinimal;
  dup += "\n[bandwidth]\nprefactor = 1\nprefactor = 2\n";
  expect_error(dup, "duplicate key 'prefactor'");

  std::string unknown = kMinimal;
  unknown += "\n[bandwidth]\nprefactr = 1\n";
  expect_error(unknown, "unknown key 'prefactr'");
  // the diagnostic points at the offending line
  expect_error(unknown, "test.ini:16");
}

TEST_CASE("type and requirement failures are reported per key") {
  std::string bad_num = kMinimal;
  bad_num.replace(bad_num.find("omega = 100"), 11, "omega = ten");
  expect_error(bad_num, "expected a number");

  std::string bad_int = kMinimal;
  bad_int.replace(bad_int.find("steps = 50"), 10, "steps = 1.5");
  expect_error(bad_int, "expected an integer");

  expect_error("[sites]\nmodel = homogeneous\nk_f = 1\n",
               "missing required section [sim]");

  std::string no_omega = kMinimal;
  no_omega.replace(no_omega.find("omega = 100"), 11, "omega_x = 100");
  expect_error(no_omega, "missing required key 'omega'");

  std::string no_model = kMinimal;
  no_model.replace(no_model.find("model = homogeneous\n"), 20, "");
  expect_error(no_model, "missing required key 'model'");

  std::string bad_enum = kMinimal;
  bad_enum.replace(bad_enum.find("model = homogeneous"), 19, "model = hetero");
  expect_error(bad_enum, "expected one of");

  std::string fixed_no_h = std::string(kMinimal) + "\n[bandwidth]\nrule = fixed\n";
  expect_error(fixed_no_h, "missing required key 'h'");
}

TEST_CASE("site model parameterizations are mutually exclusive") {
  std::string both = kMinimal;
  both.replace(both.find("model = homogeneous\nk_f = 0.5"),
               std::string("model = homogeneous\nk_f = 0.5").size(),
               "model = heterogeneous\nm = 0.5\nk_min = 0.1\nepsilon = 0.1");
  expect_error(both, "not both");

  std::string neither = kMinimal;
  neither.replace(neither.find("model = homogeneous\nk_f = 0.5"),
                  std::string("model = homogeneous\nk_f = 0.5").size(),
                  "model = heterogeneous\nm = 0.5");
  expect_error(neither, "needs k_min");

  std::string bad_bool = kMinimal;
  bad_bool.replace(bad_bool.find("model = homogeneous\nk_f = 0.5"),
                   std::string("model = homogeneous\nk_f = 0.5").size(),
                   "model = heterogeneous\nm = 0.5\nk_min = 0.1\n"
                   "redraw_per_encounter = maybe");
  expect_error(bad_bool, "expected a boolean");
}

TEST_CASE("sweep grids and row lists are mutually exclusive and checked") {
  const std::string base = kMinimal;
  expect_error(base + "\n[sweep]\nrows = 40\na0_from = 1\na0_to = 2\na0_step = 1\n",
               "not both");
  expect_error(base + "\n[sweep]\nrows = 40,,50\n", "empty entry");
  expect_error(base + "\n[sweep]\na0_from = 1\na0_to = 2\na0_step = 0\n",
               "must be positive");
  expect_error(base + "\n[sweep]\na0_from = 5\na0_to = 2\na0_step = 1\n",
               "must not be below");
  expect_error(base + "\n[sweep]\nwindow = 10\n", "needs rows");
}

TEST_CASE("simulation validation failures surface as config errors") {
  std::string bad_dt = kMinimal;
  bad_dt.replace(bad_dt.find("dt = 1e-2"), 9, "dt = 0");
  expect_error(bad_dt, "dt");

  std::string bad_kb = kMinimal;
  bad_kb.replace(bad_kb.find("k_b = 0.1"), 9, "k_b = 200");
  expect_error(bad_kb, "k_b");
}

TEST_CASE("config files load from disk") {
  const std::string path = "/tmp/kdesorb_config_roundtrip.ini";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  const LoadedConfig lc = load_config_file(path);
  CHECK(lc.sim.omega == 100.0);
  CHECK_THROWS_AS(load_config_file("/tmp/kdesorb_no_such_file.ini"),
                  ConfigError);
}
