#pragma once

// In-code scenario builders shared by the test binaries.

#include "lpwa/scenario.hpp"
#include "lpwa/units.hpp"

namespace lpwa::testutil {

inline IoTTypeSpec default_type(int id, double density_per_km2) {
  IoTTypeSpec t;
  t.id = id;
  t.parent_density = per_km2_to_per_m2(density_per_km2);
  t.daughters_per_parent = 200;
  t.scattering = ScatteringDensity::normal(100.0);
  t.reporting_period_s = 300.0;
  t.packet_time_s = 0.1;
  t.signal_bandwidth_hz = 10e3;
  t.replicas = 1;
  t.tx_power_w = dbm_to_watt(21.0);
  t.retx_bound = 8;
  t.in_phi = true;
  return t;
}

inline Scenario baseline(double type1_density_per_km2 = 1.6) {
  Scenario sc;
  sc.types.push_back(default_type(1, type1_density_per_km2));
  sc.network.ap_density = 5.5e-8;
  sc.network.system_bandwidth_hz = 100e3;
  sc.network.code_count = 1;
  sc.network.rejection_factor = 0.0;
  sc.network.noise_density_w_hz = dbm_to_watt(-174.0);
  sc.network.ell_max = 1;
  sc.network.channel.pathloss = PathlossModel::from_db_law(133.0, 38.3, 1000.0);
  sc.network.channel.nakagami_m = 1;
  sc.network.channel.nakagami_omega = 1.0;
  sc.network.channel.sinr_threshold = 1.0;
  sc.cost = {1.0, 5e-4, 4.4052863436e-4, 0.5, 1.5, km2_to_m2(400.0)};
  sc.energy = {1000.0, 0.1, 0.2, 0.010, 0.5};
  sc.rng_seed = 1;
  return sc;
}

// Two-type variant used by the validation studies.
inline Scenario two_type_validation() {
  Scenario sc = baseline(0.19);
  sc.types[0].daughters_per_parent = 1200;
  IoTTypeSpec t2 = default_type(2, 3.8);
  t2.daughters_per_parent = 30;
  t2.tx_power_w = dbm_to_watt(25.0);
  sc.types.push_back(t2);
  return sc;
}

// Quartic pathloss variant for the closed spatial-success route.
inline Scenario baseline_quartic(double type1_density_per_km2 = 1.6) {
  Scenario sc = baseline(type1_density_per_km2);
  sc.network.channel.pathloss = PathlossModel::from_db_law(133.0, 40.0, 1000.0);
  return sc;
}

}  // namespace lpwa::testutil
