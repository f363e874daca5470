#pragma once

#include "lpwa/scenario.hpp"

#include <stdexcept>
#include <string>

namespace lpwa {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat sectioned key-value format: [network], [cost], [energy], [run] and
// one [type N] section per IoT class.  dB/dBm and per-km^2 values convert
// to linear SI on load; the loaded scenario is validated.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Dotted parameter paths for sweeps, e.g. "network.ap_density_per_km2"
// or "types[1].tx_power_dbm".  Throws std::invalid_argument for paths
// that do not exist in the scenario.
void set_parameter(Scenario& sc, const std::string& path, double value);
double get_parameter(const Scenario& sc, const std::string& path);

}  // namespace lpwa
