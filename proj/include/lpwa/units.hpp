#pragma once

#include <cmath>

namespace lpwa {

// Internal convention: SI throughout (meters, seconds, watts, Hz, m^-2).
// dB/dBm and per-km^2 values are converted at the parse boundary only.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double per_km2_to_per_m2(double d) { return d * 1e-6; }
inline double per_m2_to_per_km2(double d) { return d * 1e6; }
inline double km2_to_m2(double a) { return a * 1e6; }

}  // namespace lpwa
