#pragma once

#include "lpwa/reliability.hpp"
#include "lpwa/scenario.hpp"

#include <stdexcept>
#include <vector>

namespace lpwa {

struct MissingPopulation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LifetimeDefinition { SIBL, AIBL, LIBL };

struct LifetimeResult {
  double lifetime_s = 0.0;
  double expected_trials = 0.0;  // beta feeding the energy balance
  LifetimeDefinition definition = LifetimeDefinition::AIBL;
};

// Average number of trials, truncated form: the all-fail event carries
// no weight, so the sum is 0 at p = 0 and caps at B.
double expected_trials(double p_per_replica, int replicas, int retx_bound);
double expected_trials_from_attempt_failure(double q_attempt, int retx_bound);

// Battery lifetime for a given trial count (energy balance per period).
double lifetime_from_trials(const IoTTypeSpec& i, const DeviceEnergyModel& e,
                            double beta);

// Device-level lifetime from the device's own AP distances.
LifetimeResult device_lifetime(const IoTTypeSpec& i,
                               const std::vector<double>& ap_distances_m,
                               const Scenario& sc,
                               SuccessMethod method = SuccessMethod::ClosedApprox,
                               const QuadratureSpec& spec = {});

// Lifetimes of every type-i device in one sampled deployment.
struct LifetimePopulation {
  std::vector<double> lifetimes_s;
};

// AIBL is analytic (spatial success probability); SIBL/LIBL are order
// statistics over a simulated population and throw MissingPopulation
// when none is attached.
LifetimeResult application_lifetime(const IoTTypeSpec& i, const Scenario& sc,
                                    LifetimeDefinition def,
                                    const LifetimePopulation* population = nullptr,
                                    SuccessMethod method = SuccessMethod::ClosedApprox,
                                    const QuadratureSpec& spec = {});

// AP energy per unit time: static draw plus per-packet forwarding load.
double ap_energy_per_time(const Scenario& sc);
double ap_energy_per_time_at(const Scenario& sc, double ap_density);

// Annual access-network cost, optionally at overridden provisioning.
double network_cost(const Scenario& sc);
double network_cost_at(const Scenario& sc, double ap_density,
                       double system_bandwidth_hz);

}  // namespace lpwa
