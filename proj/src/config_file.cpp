#include "kdesorb/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace kdesorb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

// One parsed section: key -> (value, line). The loader pulls typed values
// out and finally complains about any key nobody asked for.
struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

struct Ini {
  std::string source;
  std::map<std::string, Section> sections;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    std::ostringstream os;
    os << source << ':' << line << ": " << msg;
    throw ConfigError(os.str());
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source + ": " + msg);
  }

  bool has(const std::string& sec) const { return sections.count(sec) != 0; }

  Entry* find(const std::string& sec, const std::string& key) {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto e = s->second.entries.find(key);
    if (e == s->second.entries.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  double get_double(const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) fail("[" + sec + "] is missing required key '" + key + "'");
    return parse_double(*e, sec, key);
  }
  double get_double(const std::string& sec, const std::string& key,
                    double fallback) {
    Entry* e = find(sec, key);
    return e ? parse_double(*e, sec, key) : fallback;
  }
  long get_long(const std::string& sec, const std::string& key,
                long fallback) {
    Entry* e = find(sec, key);
    return e ? parse_long(*e, sec, key) : fallback;
  }
  long get_long(const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) fail("[" + sec + "] is missing required key '" + key + "'");
    return parse_long(*e, sec, key);
  }
  bool get_bool(const std::string& sec, const std::string& key,
                bool fallback) {
    Entry* e = find(sec, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no")
      return false;
    fail(e->line, "[" + sec + "] " + key + ": expected a boolean, got '" +
                      e->value + "'");
  }
  std::string get_enum(const std::string& sec, const std::string& key,
                       const std::vector<std::string>& allowed,
                       const std::string& fallback) {
    Entry* e = find(sec, key);
    if (!e) return fallback;
    for (const auto& a : allowed)
      if (e->value == a) return a;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(e->line, "[" + sec + "] " + key + ": expected one of " + list +
                      ", got '" + e->value + "'");
  }

  double parse_double(const Entry& e, const std::string& sec,
                      const std::string& key) const {
    double v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    const auto res = std::from_chars(b, end, v);
    if (res.ec != std::errc() || res.ptr != end)
      fail(e.line, "[" + sec + "] " + key + ": expected a number, got '" +
                       e.value + "'");
    return v;
  }
  long parse_long(const Entry& e, const std::string& sec,
                  const std::string& key) const {
    long v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    const auto res = std::from_chars(b, end, v);
    if (res.ec != std::errc() || res.ptr != end)
      fail(e.line, "[" + sec + "] " + key + ": expected an integer, got '" +
                       e.value + "'");
    return v;
  }

  void check_all_used() const {
    for (const auto& [name, sec] : sections)
      for (const auto& [key, e] : sec.entries)
        if (!e.used)
          fail(e.line, "unknown key '" + key + "' in [" + name + "]");
  }
};

Ini tokenize(const std::string& text, const std::string& name) {
  Ini ini;
  ini.source = name;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  Section* current = nullptr;
  while (std::getline(is, raw)) {
    ++line_no;
    // strip comments starting with # or ; outside of values we care about
    const auto hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        ini.fail(line_no, "malformed section header '" + line + "'");
      const std::string sec = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"sim", "sites", "bandwidth", "sweep"};
      bool ok = false;
      for (const char* k : known) ok = ok || sec == k;
      if (!ok) ini.fail(line_no, "unknown section [" + sec + "]");
      current = &ini.sections[sec];
      current->name = sec;
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      ini.fail(line_no, "expected 'key = value', got '" + line + "'");
    if (!current) ini.fail(line_no, "key before any [section] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      ini.fail(line_no, "expected 'key = value', got '" + line + "'");
    if (current->entries.count(key))
      ini.fail(line_no, "duplicate key '" + key + "' in [" + current->name + "]");
    current->entries[key] = Entry{value, line_no, false};
  }
  return ini;
}

// "40" or "40x8": an A0 with an optional replicate count.
SweepRow parse_row_token(Ini& ini, const std::string& token, int line) {
  SweepRow row;
  const auto x = token.find('x');
  std::string a0s = token, reps;
  if (x != std::string::npos) {
    a0s = trim(token.substr(0, x));
    reps = trim(token.substr(x + 1));
  }
  Entry ea{a0s, line, true};
  row.a0 = ini.parse_double(ea, "sweep", "rows");
  if (!reps.empty()) {
    Entry er{reps, line, true};
    row.replicates = static_cast<int>(ini.parse_long(er, "sweep", "rows"));
  }
  return row;
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::string& name) {
  Ini ini = tokenize(text, name);
  LoadedConfig out;
  SimConfig& sim = out.sim;

  if (!ini.has("sim")) ini.fail("missing required section [sim]");
  sim.omega = ini.get_double("sim", "omega");
  sim.diffusion = ini.get_double("sim", "diffusion");
  sim.dt = ini.get_double("sim", "dt");
  sim.n_steps = ini.get_long("sim", "steps");
  sim.particle_mass = ini.get_double("sim", "particle_mass");
  sim.k_b = ini.get_double("sim", "k_b");
  sim.conc_B0 = ini.get_double("sim", "conc_b0");
  sim.conc_A0 = ini.get_double("sim", "conc_a0", 0.0);
  sim.conc_C0 = ini.get_double("sim", "conc_c0", 0.0);
  sim.seed = static_cast<std::uint64_t>(ini.get_long("sim", "seed", 1));
  sim.record_every = ini.get_long("sim", "record_every", 1);

  if (!ini.has("sites")) ini.fail("missing required section [sites]");
  const std::string model =
      ini.get_enum("sites", "model", {"homogeneous", "heterogeneous"}, "");
  if (model.empty()) ini.fail("[sites] is missing required key 'model'");
  if (model == "homogeneous") {
    sim.sites.kind = SiteModelKind::homogeneous;
    sim.sites.k_f = ini.get_double("sites", "k_f");
  } else {
    sim.sites.kind = SiteModelKind::heterogeneous;
    sim.sites.m = ini.get_double("sites", "m");
    Entry* kmin = ini.find("sites", "k_min");
    Entry* eps = ini.find("sites", "epsilon");
    Entry* ac = ini.find("sites", "a_c");
    if (kmin && (eps || ac))
      ini.fail(kmin->line,
               "[sites] give either k_min or the epsilon / a_c pair, not both");
    if (kmin) {
      sim.sites.k_min_direct = true;
      sim.sites.k_min = ini.parse_double(*kmin, "sites", "k_min");
    } else if (eps && ac) {
      sim.sites.k_min_direct = false;
      sim.sites.epsilon = ini.parse_double(*eps, "sites", "epsilon");
      sim.sites.A_c = ini.parse_double(*ac, "sites", "a_c");
    } else {
      ini.fail("[sites] needs k_min, or epsilon together with a_c");
    }
    sim.sites.redraw_per_encounter =
        ini.get_bool("sites", "redraw_per_encounter", false);
  }

  const std::string rule = ini.get_enum(
      "bandwidth", "rule", {"rule_of_thumb", "fixed"}, "rule_of_thumb");
  if (rule == "fixed") {
    sim.bandwidth.variant = BandwidthVariant::fixed;
    sim.bandwidth.fixed_h = ini.get_double("bandwidth", "h");
  } else {
    sim.bandwidth.variant = BandwidthVariant::rule_of_thumb;
    sim.bandwidth.prefactor = ini.get_double("bandwidth", "prefactor", 1.06);
  }
  const std::string pop = ini.get_enum("bandwidth", "population",
                                       {"mobile_a", "a_plus_b"}, "mobile_a");
  sim.bandwidth.population = pop == "mobile_a" ? BandwidthPopulation::mobile_a
                                               : BandwidthPopulation::a_plus_b;

  if (ini.has("sweep")) {
    out.has_sweep = true;
    out.sweep_window = ini.get_long("sweep", "window", 100);
    Entry* rows = ini.find("sweep", "rows");
    Entry* from = ini.find("sweep", "a0_from");
    Entry* to = ini.find("sweep", "a0_to");
    Entry* step = ini.find("sweep", "a0_step");
    const long reps = ini.get_long("sweep", "replicates", 1);
    if (rows && (from || to || step))
      ini.fail(rows->line,
               "[sweep] give either rows or the a0_from / a0_to / a0_step "
               "grid, not both");
    if (rows) {
      std::istringstream rs(rows->value);
      std::string token;
      while (std::getline(rs, token, ',')) {
        token = trim(token);
        if (token.empty())
          ini.fail(rows->line, "[sweep] rows: empty entry in the list");
        out.sweep_rows.push_back(parse_row_token(ini, token, rows->line));
      }
      if (out.sweep_rows.empty())
        ini.fail(rows->line, "[sweep] rows: empty list");
    } else if (from && to && step) {
      const double a_from = ini.parse_double(*from, "sweep", "a0_from");
      const double a_to = ini.parse_double(*to, "sweep", "a0_to");
      const double a_step = ini.parse_double(*step, "sweep", "a0_step");
      if (!(a_step > 0))
        ini.fail(step->line, "[sweep] a0_step: must be positive");
      if (a_to < a_from)
        ini.fail(to->line, "[sweep] a0_to: must not be below a0_from");
      const long count =
          static_cast<long>(std::floor((a_to - a_from) / a_step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i)
        out.sweep_rows.push_back(
            SweepRow{a_from + a_step * static_cast<double>(i),
                     static_cast<int>(reps)});
    } else {
      ini.fail("[sweep] needs rows, or a0_from with a0_to and a0_step");
    }
  }

  ini.check_all_used();
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    ini.fail(e.what());
  }
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace kdesorb
