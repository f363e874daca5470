#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lpwa {

// Scattering density of daughter points around a cluster parent.
// Both variants are isotropic and integrate to one over R^2.
struct ScatteringDensity {
  enum class Kind { Normal, Uniform };
  Kind kind = Kind::Normal;
  double sigma_m = 0.0;    // Normal: per-axis standard deviation
  double radius_m = 0.0;   // Uniform: cluster radius

  static ScatteringDensity normal(double sigma_m);
  static ScatteringDensity uniform(double radius_m);
};

// g(d) = 1 / (alpha1 + alpha2 * d^delta).  alpha1 = 0 gives the pure
// power law g(d) = alpha * d^-delta with alpha = 1/alpha2.
struct PathlossModel {
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  double delta = 4.0;

  static PathlossModel power_law(double alpha, double delta);
  // Loss of "a_db + b_db*log10(d/ref_m)" dB at distance d.
  static PathlossModel from_db_law(double a_db, double b_db, double ref_m);

  bool is_power_law() const { return alpha1 == 0.0; }
  double power_law_alpha() const { return 1.0 / alpha2; }
};

struct ChannelModel {
  PathlossModel pathloss;
  int nakagami_m = 1;
  double nakagami_omega = 1.0;
  double sinr_threshold = 1.0;  // linear
};

// One IoT traffic class.  Densities are per m^2, times in seconds,
// bandwidth in Hz, power in watts.
struct IoTTypeSpec {
  int id = 0;
  double parent_density = 0.0;
  double daughters_per_parent = 0.0;
  ScatteringDensity scattering;
  double reporting_period_s = 0.0;
  double packet_time_s = 0.0;
  double signal_bandwidth_hz = 0.0;
  int replicas = 1;
  double tx_power_w = 0.0;
  int retx_bound = 1;
  bool in_phi = true;
};

struct NetworkConfig {
  double ap_density = 0.0;          // per m^2
  double system_bandwidth_hz = 0.0;
  int code_count = 1;               // number of shared semi-orthogonal codes
  double rejection_factor = 0.0;    // residual cross-code interference in [0,1]
  double noise_density_w_hz = 0.0;
  int ell_max = 1;
  ChannelModel channel;
};

struct CostCoefficients {
  double c1_per_ap_year = 0.0;
  double c2_per_joule = 0.0;
  double c3_per_hz_year = 0.0;
  double ap_static_power_w = 0.0;   // load-independent draw per AP
  double ap_load_power_w = 0.0;     // per forwarded packet equivalent
  double area_m2 = 0.0;
};

struct DeviceEnergyModel {
  double stored_j = 0.0;            // battery budget E0
  double static_per_period_j = 0.0; // sensing/processing per reporting period
  double ack_listen_j = 0.0;        // ACK listening per attempt
  double circuit_power_w = 0.0;     // circuit draw while transmitting
  double pa_eta = 0.0;              // PA coefficient multiplying tx power
};

struct Scenario {
  std::vector<IoTTypeSpec> types;
  NetworkConfig network;
  CostCoefficients cost;
  DeviceEnergyModel energy;
  std::uint64_t rng_seed = 1;

  const IoTTypeSpec& type_by_id(int id) const;
  bool has_type(int id) const;
  // Noise power over one type's signal bandwidth.
  double noise_power_w(const IoTTypeSpec& t) const {
    return network.noise_density_w_hz * t.signal_bandwidth_hz;
  }
};

struct Violation {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Pure: collects every violated invariant with its field path.
ValidationReport validate(const Scenario& sc);

}  // namespace lpwa
