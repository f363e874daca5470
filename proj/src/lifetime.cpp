#include "lpwa/lifetime.hpp"

#include <algorithm>
#include <cmath>

namespace lpwa {

double expected_trials_from_attempt_failure(double q_attempt, int retx_bound) {
  if (q_attempt < 0.0 || q_attempt > 1.0)
    throw std::domain_error("expected_trials: attempt failure must be in [0,1]");
  if (retx_bound < 1)
    throw std::domain_error("expected_trials: retx bound must be >= 1");
  double beta = 0.0;
  double qpow = 1.0;  // q^(j-1)
  for (int j = 1; j <= retx_bound; ++j) {
    beta += j * (1.0 - q_attempt) * qpow;
    qpow *= q_attempt;
  }
  return beta;
}

double expected_trials(double p_per_replica, int replicas, int retx_bound) {
  if (p_per_replica < 0.0 || p_per_replica > 1.0)
    throw std::domain_error("expected_trials: p must be in [0,1]");
  if (replicas < 1) throw std::domain_error("expected_trials: replicas must be >= 1");
  const double q = std::pow(1.0 - p_per_replica, replicas);
  return expected_trials_from_attempt_failure(q, retx_bound);
}

double lifetime_from_trials(const IoTTypeSpec& i, const DeviceEnergyModel& e,
                            double beta) {
  const double per_period =
      e.static_per_period_j + beta * e.ack_listen_j +
      beta * i.replicas * (e.pa_eta * i.tx_power_w + e.circuit_power_w) *
          i.packet_time_s;
  return e.stored_j * i.reporting_period_s / per_period;
}

LifetimeResult device_lifetime(const IoTTypeSpec& i,
                               const std::vector<double>& ap_distances_m,
                               const Scenario& sc, SuccessMethod method,
                               const QuadratureSpec& spec) {
  if (ap_distances_m.empty())
    throw std::domain_error("device_lifetime: AP distance list is empty");
  double replica_fail = 1.0;
  for (double d : ap_distances_m)
    replica_fail *= 1.0 - p_success_at(i, d, sc, method, spec);
  const double q = std::pow(replica_fail, i.replicas);
  const double beta = expected_trials_from_attempt_failure(q, i.retx_bound);
  return {lifetime_from_trials(i, sc.energy, beta), beta, LifetimeDefinition::AIBL};
}

LifetimeResult application_lifetime(const IoTTypeSpec& i, const Scenario& sc,
                                    LifetimeDefinition def,
                                    const LifetimePopulation* population,
                                    SuccessMethod method,
                                    const QuadratureSpec& spec) {
  if (def == LifetimeDefinition::AIBL) {
    const double p_s = p_success_spatial(i, sc, method, spec);
    const double beta = expected_trials(p_s, i.replicas, i.retx_bound);
    return {lifetime_from_trials(i, sc.energy, beta), beta, def};
  }
  if (population == nullptr || population->lifetimes_s.empty())
    throw MissingPopulation("SIBL/LIBL need a simulated device population");
  const auto [lo, hi] = std::minmax_element(population->lifetimes_s.begin(),
                                            population->lifetimes_s.end());
  return {def == LifetimeDefinition::SIBL ? *lo : *hi, 0.0, def};
}

double ap_energy_per_time_at(const Scenario& sc, double ap_density) {
  double load = 0.0;
  for (const auto& t : sc.types) {
    if (!t.in_phi) continue;
    load += t.parent_density * t.daughters_per_parent /
            (ap_density * t.reporting_period_s);
  }
  return sc.cost.ap_static_power_w + sc.cost.ap_load_power_w * load;
}

double ap_energy_per_time(const Scenario& sc) {
  return ap_energy_per_time_at(sc, sc.network.ap_density);
}

double network_cost_at(const Scenario& sc, double ap_density,
                       double system_bandwidth_hz) {
  const auto& c = sc.cost;
  const double e_cons = ap_energy_per_time_at(sc, ap_density);
  return c.c1_per_ap_year * ap_density * c.area_m2 +
         c.c2_per_joule * ap_density * c.area_m2 * e_cons +
         c.c3_per_hz_year * system_bandwidth_hz;
}

double network_cost(const Scenario& sc) {
  return network_cost_at(sc, sc.network.ap_density, sc.network.system_bandwidth_hz);
}

}  // namespace lpwa
