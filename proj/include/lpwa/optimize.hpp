#pragma once

#include "lpwa/lifetime.hpp"
#include "lpwa/reliability.hpp"
#include "lpwa/scenario.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lpwa {

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleBandwidth : Infeasible {
  using Infeasible::Infeasible;
};
struct Unsatisfiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// P_s^req = 1 - P_o^req^(1/(nB)).
double required_success(double p_o_req, int replicas, int retx_bound);

// Copy of the scenario with overridden provisioning decisions.
Scenario with_provisioning(const Scenario& sc, double ap_density,
                           double system_bandwidth_hz);
Scenario with_operation(const Scenario& sc, int type_id, int replicas,
                        double tx_power_w);

// Closed-form success probability as a function of transmit power
// (fast heuristic; mixes quartic interference constants with a
// quadratic noise exponent, so it is re-verified wherever it decides).
double closed_ps_of_power(const IoTTypeSpec& i, const Scenario& sc,
                          double tx_power_w);

// Bandwidth / AP-density tradeoff of the closed form.  Throws
// InfeasibleBandwidth below the denominator pole at w_min.
double lambda_a_of_w(double system_bandwidth_hz, const IoTTypeSpec& i,
                     const Scenario& sc, double p_s_req);
double lambda_a_w_min(const IoTTypeSpec& i, const Scenario& sc, double p_s_req);

enum class ProvisionSolver { ClosedForm, NumericBisection };

// Reliability requirement for provisioning: either a spatial outage cap
// or a required conditional success at the cell-edge distance d_eg.
struct ReliabilityRequirement {
  enum class Kind { SpatialOutage, CellEdgeSuccess };
  Kind kind = Kind::SpatialOutage;
  double value = 0.0;
};

struct ProvisioningSolution {
  double ap_density = 0.0;
  double bandwidth_hz = 0.0;
  double cost_per_year = 0.0;
  bool feasible = false;
  ProvisionSolver method = ProvisionSolver::NumericBisection;
  // Signed slack of the reliability constraint per served type id
  // (>= 0 means satisfied), evaluated on the numeric path.
  std::vector<std::pair<int, double>> constraint_slack;
};

ProvisioningSolution provision_optimize(const Scenario& sc,
                                        const ReliabilityRequirement& req,
                                        std::pair<double, double> w_range_hz,
                                        ProvisionSolver solver,
                                        const QuadratureSpec& spec = {});

// Minimal AP density meeting the requirement at a fixed bandwidth on the
// numeric reliability path; negative when infeasible within the cap.
double provision_min_density(const Scenario& sc, double system_bandwidth_hz,
                             const ReliabilityRequirement& req,
                             const QuadratureSpec& spec = {});

// Smallest replica count meeting the outage requirement at this power,
// using the closed-form success probability.  n_max_cap = 0 leaves the
// count unbounded.
int n_of_p(double tx_power_w, const IoTTypeSpec& i, const Scenario& sc,
           double p_o_req, int retx_bound, int n_max_cap = 0);

// Power below which no n <= n_max satisfies the outage requirement.
double p_min(const IoTTypeSpec& i, const Scenario& sc, double p_o_req,
             int n_max, int retx_bound);

struct OperationSolution {
  struct PerType {
    int type_id = 0;
    int replicas = 0;
    double tx_power_w = 0.0;
    double lifetime_s = 0.0;
    double p_s = 0.0;
    bool feasible = false;
  };
  std::vector<PerType> types;
  bool feasible = false;
};

// Reliability metric feeding the lifetime objective and outage cap:
// the conditional success at the cell-edge distance (how the evaluation
// studies state their requirement) or the spatial average.
enum class OperationMetric { CellEdge, Spatial };

double operation_success(const IoTTypeSpec& i, const Scenario& sc,
                         OperationMetric metric, const QuadratureSpec& spec = {});

// Lifetime-optimal (P_i, n_i) per served type under an outage cap; grid
// search with golden-section refinement, re-verified on the numeric
// reliability path.  Types are optimized round-robin to a fixed point.
OperationSolution operation_optimize(const Scenario& sc, double p_o_req,
                                     int n_max, double p_max_w,
                                     const QuadratureSpec& spec = {},
                                     OperationMetric metric = OperationMetric::CellEdge);

// Scalar golden-section minimizer on a bracket.
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_iter = 200);

}  // namespace lpwa
