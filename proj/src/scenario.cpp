#include "lpwa/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lpwa {

ScatteringDensity ScatteringDensity::normal(double sigma_m) {
  ScatteringDensity s;
  s.kind = Kind::Normal;
  s.sigma_m = sigma_m;
  return s;
}

ScatteringDensity ScatteringDensity::uniform(double radius_m) {
  ScatteringDensity s;
  s.kind = Kind::Uniform;
  s.radius_m = radius_m;
  return s;
}

PathlossModel PathlossModel::power_law(double alpha, double delta) {
  PathlossModel m;
  m.alpha1 = 0.0;
  m.alpha2 = 1.0 / alpha;
  m.delta = delta;
  return m;
}

PathlossModel PathlossModel::from_db_law(double a_db, double b_db, double ref_m) {
  // loss_db(d) = a + b*log10(d/ref)  =>  g(d) = 10^(-a/10) * (d/ref)^(-b/10)
  PathlossModel m;
  m.alpha1 = 0.0;
  m.delta = b_db / 10.0;
  m.alpha2 = std::pow(10.0, a_db / 10.0) * std::pow(ref_m, -m.delta);
  return m;
}

const IoTTypeSpec& Scenario::type_by_id(int id) const {
  for (const auto& t : types)
    if (t.id == id) return t;
  throw std::out_of_range("no IoT type with id " + std::to_string(id));
}

bool Scenario::has_type(int id) const {
  for (const auto& t : types)
    if (t.id == id) return true;
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.path << ": " << v.message << "\n";
  return os.str();
}

namespace {

void check(ValidationReport& r, bool ok, const std::string& path, const std::string& msg) {
  if (!ok) r.violations.push_back({path, msg});
}

bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ValidationReport validate(const Scenario& sc) {
  ValidationReport r;

  const auto& net = sc.network;
  check(r, finite_pos(net.ap_density), "network.ap_density", "must be > 0");
  check(r, finite_pos(net.system_bandwidth_hz), "network.system_bandwidth", "must be > 0");
  check(r, net.code_count >= 1, "network.code_count", "must be >= 1");
  check(r, net.rejection_factor >= 0.0 && net.rejection_factor <= 1.0,
        "network.rejection_factor", "must be in [0,1]");
  check(r, net.noise_density_w_hz >= 0.0 && std::isfinite(net.noise_density_w_hz),
        "network.noise_density", "must be >= 0");
  check(r, net.ell_max >= 1, "network.ell_max", "must be >= 1");

  const auto& ch = net.channel;
  check(r, ch.nakagami_m >= 1, "network.channel.nakagami_m", "must be >= 1");
  check(r, finite_pos(ch.nakagami_omega), "network.channel.nakagami_omega", "must be > 0");
  check(r, finite_pos(ch.sinr_threshold), "network.channel.sinr_threshold", "must be > 0");
  check(r, finite_pos(ch.pathloss.alpha2), "network.channel.pathloss.alpha2", "must be > 0");
  check(r, ch.pathloss.alpha1 >= 0.0, "network.channel.pathloss.alpha1", "must be >= 0");
  check(r, finite_pos(ch.pathloss.delta), "network.channel.pathloss.delta", "must be > 0");

  check(r, !sc.types.empty(), "types", "at least one IoT type required");
  std::set<int> ids;
  bool any_phi = false;
  for (std::size_t n = 0; n < sc.types.size(); ++n) {
    const auto& t = sc.types[n];
    const std::string p = "types[" + std::to_string(t.id) + "]";
    check(r, ids.insert(t.id).second, p + ".id", "duplicate type id");
    check(r, finite_pos(t.parent_density), p + ".parent_density", "must be > 0");
    check(r, finite_pos(t.daughters_per_parent), p + ".daughters_per_parent", "must be > 0");
    if (t.scattering.kind == ScatteringDensity::Kind::Normal)
      check(r, finite_pos(t.scattering.sigma_m), p + ".scattering.sigma", "must be > 0");
    else
      check(r, finite_pos(t.scattering.radius_m), p + ".scattering.radius", "must be > 0");
    check(r, finite_pos(t.reporting_period_s), p + ".reporting_period", "must be > 0");
    check(r, finite_pos(t.packet_time_s), p + ".packet_time", "must be > 0");
    check(r, t.replicas >= 1, p + ".replicas", "must be >= 1");
    if (t.replicas >= 1 && t.packet_time_s > 0.0)
      check(r, t.replicas * t.packet_time_s < t.reporting_period_s, p + ".replicas",
            "duty cycle >= 1: replicas*packet_time must be < reporting_period");
    check(r, finite_pos(t.signal_bandwidth_hz), p + ".signal_bandwidth", "must be > 0");
    check(r, t.signal_bandwidth_hz <= net.system_bandwidth_hz, p + ".signal_bandwidth",
          "signal_bandwidth exceeds system bandwidth");
    check(r, finite_pos(t.tx_power_w), p + ".tx_power", "must be > 0");
    check(r, t.retx_bound >= 1, p + ".retx_bound", "must be >= 1");
    any_phi = any_phi || t.in_phi;
  }
  check(r, any_phi, "types", "at least one type must be in the served subset phi");

  const auto& c = sc.cost;
  check(r, c.c1_per_ap_year >= 0.0, "cost.c1", "must be >= 0");
  check(r, c.c2_per_joule >= 0.0, "cost.c2", "must be >= 0");
  check(r, c.c3_per_hz_year >= 0.0, "cost.c3", "must be >= 0");
  check(r, c.ap_static_power_w >= 0.0, "cost.ap_static_power", "must be >= 0");
  check(r, c.ap_load_power_w >= 0.0, "cost.ap_load_power", "must be >= 0");
  check(r, finite_pos(c.area_m2), "cost.area", "must be > 0");

  const auto& e = sc.energy;
  check(r, finite_pos(e.stored_j), "energy.stored", "must be > 0");
  check(r, finite_pos(e.static_per_period_j), "energy.static_per_period", "must be > 0");
  check(r, finite_pos(e.ack_listen_j), "energy.ack_listen", "must be > 0");
  check(r, finite_pos(e.circuit_power_w), "energy.circuit_power", "must be > 0");
  check(r, finite_pos(e.pa_eta), "energy.pa_eta", "must be > 0");

  return r;
}

}  // namespace lpwa
