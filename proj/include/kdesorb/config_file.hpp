#pragma once
#include <stdexcept>
#include <string>

#include "kdesorb/config.hpp"
#include "kdesorb/sweep.hpp"

namespace kdesorb {

// Raised on malformed input with the file, line, and key already in the
// message, so the CLI can print it verbatim and exit with the usage code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedConfig {
  SimConfig sim;
  bool has_sweep = false;
  std::vector<SweepRow> sweep_rows;
  long sweep_window = 100;
};

// Parses an INI-style config. Sections: [sim], [sites], [bandwidth] and the
// optional [sweep]. Unknown sections or keys are errors (catches typos), as
// are missing required keys. See the shipped configs/ for the format.
LoadedConfig load_config_file(const std::string& path);

// Same parser over an in-memory string; `name` appears in diagnostics.
LoadedConfig parse_config(const std::string& text, const std::string& name);

}  // namespace kdesorb
