#include "lpwa/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "lpwa/geometry.hpp"
#include "lpwa/units.hpp"

namespace lpwa {

double required_success(double p_o_req, int replicas, int retx_bound) {
  if (!(p_o_req > 0.0 && p_o_req < 1.0))
    throw std::domain_error("required_success: P_o req must be in (0,1)");
  return 1.0 - std::pow(p_o_req, 1.0 / (static_cast<double>(replicas) * retx_bound));
}

Scenario with_provisioning(const Scenario& sc, double ap_density,
                           double system_bandwidth_hz) {
  Scenario out = sc;
  out.network.ap_density = ap_density;
  out.network.system_bandwidth_hz = system_bandwidth_hz;
  return out;
}

Scenario with_operation(const Scenario& sc, int type_id, int replicas,
                        double tx_power_w) {
  Scenario out = sc;
  for (auto& t : out.types) {
    if (t.id == type_id) {
      t.replicas = replicas;
      t.tx_power_w = tx_power_w;
    }
  }
  return out;
}

namespace {

// Activity mass (per cluster, scaled by W so it is bandwidth-free) that
// carries a nonzero code weight, and the code-weighted sqrt term of the
// closed forms.
double code_visible_mass_hz(const IoTTypeSpec& t, const NetworkConfig& net) {
  const double mass_hz = t.daughters_per_parent *
                         (t.replicas * t.packet_time_s / t.reporting_period_s) *
                         t.signal_bandwidth_hz;
  double frac = 0.0;
  if (t.in_phi) {
    const double cw = static_cast<double>(net.code_count);
    frac += 1.0 / cw;                                       // Q1 = 1
    if (net.rejection_factor > 0.0) frac += (cw - 1.0) / cw;
  } else if (net.rejection_factor > 0.0) {
    frac = 1.0;
  }
  return mass_hz * frac;
}

struct ClosedCoef {
  double d0;       // numerator, includes the intra-cluster factor
  double d1;       // interference sum, multiplies 1/sqrt(P)
  double noise_a;  // noise coefficient, multiplies 1/P
  double lap;      // lambda_a * pi
};

ClosedCoef closed_coefficients(const IoTTypeSpec& i, const Scenario& sc) {
  const auto& ch = sc.network.channel;
  const double gamma = ch.sinr_threshold;
  const double omega = ch.nakagami_omega;
  const double alpha = ch.pathloss.power_law_alpha();
  const double csc_half_pi = 1.0 / std::sin(M_PI / 2.0);
  ClosedCoef c{};
  c.lap = sc.network.ap_density * M_PI;
  const double intra =
      code_visible_mass_hz(i, sc.network) / sc.network.system_bandwidth_hz;
  c.d0 = 0.5 * std::sqrt(M_PI) * c.lap * std::exp(-intra);
  c.d1 = 0.0;
  for (const auto& k : sc.types) {
    const ActivityFactors act = activity_factors(k, sc.network);
    const double buckets[2] = {act.same_code, act.cross_code};
    for (int j = 0; j < 2; ++j) {
      const double q = code_weight(sc.network, j);
      if (buckets[j] <= 0.0 || q <= 0.0) continue;
      c.d1 += k.parent_density * buckets[j] *
              std::sqrt(q * gamma * k.tx_power_w / omega) *
              (M_PI * M_PI / 2.0) * csc_half_pi;
    }
  }
  c.noise_a = sc.noise_power_w(i) * gamma / (omega * alpha);
  return c;
}

}  // namespace

double closed_ps_of_power(const IoTTypeSpec& i, const Scenario& sc,
                          double tx_power_w) {
  const ClosedCoef c = closed_coefficients(i, sc);
  return c.d0 /
         (c.d1 / std::sqrt(tx_power_w) + c.lap + c.noise_a / tx_power_w);
}

namespace {

struct TradeoffCoef {
  double a1;     // intra-cluster mass * W
  double a2;     // interference sum * W (contains the 1/pi)
  double noise;  // N*gamma / (pi*Omega*P_i*alpha)
};

TradeoffCoef tradeoff_coefficients(const IoTTypeSpec& i, const Scenario& sc) {
  const auto& ch = sc.network.channel;
  const double gamma = ch.sinr_threshold;
  const double omega = ch.nakagami_omega;
  const double alpha = ch.pathloss.power_law_alpha();
  const double csc_half_pi = 1.0 / std::sin(M_PI / 2.0);
  TradeoffCoef c{};
  c.a1 = code_visible_mass_hz(i, sc.network);
  c.a2 = 0.0;
  for (const auto& k : sc.types) {
    const double mass_hz = k.daughters_per_parent *
                           (k.replicas * k.packet_time_s / k.reporting_period_s) *
                           k.signal_bandwidth_hz;
    const double cw = static_cast<double>(sc.network.code_count);
    const double fracs[2] = {k.in_phi ? 1.0 / cw : 0.0,
                             k.in_phi ? (cw - 1.0) / cw : 1.0};
    for (int j = 0; j < 2; ++j) {
      const double q = code_weight(sc.network, j);
      if (fracs[j] <= 0.0 || q <= 0.0) continue;
      c.a2 += k.parent_density * mass_hz * fracs[j] *
              std::sqrt(q * gamma * k.tx_power_w / (omega * i.tx_power_w)) *
              (M_PI / 2.0) * csc_half_pi;
    }
  }
  c.noise = sc.noise_power_w(i) * gamma / (M_PI * omega * i.tx_power_w * alpha);
  return c;
}

}  // namespace

double lambda_a_w_min(const IoTTypeSpec& i, const Scenario& sc, double p_s_req) {
  const double head = 0.5 * std::sqrt(M_PI) / p_s_req;
  if (head <= 1.0)
    throw InfeasibleBandwidth(
        "closed form infeasible: required success exceeds its ceiling");
  const TradeoffCoef c = tradeoff_coefficients(i, sc);
  if (c.a1 <= 0.0) return 0.0;
  return c.a1 / std::log(head);
}

double lambda_a_of_w(double system_bandwidth_hz, const IoTTypeSpec& i,
                     const Scenario& sc, double p_s_req) {
  const TradeoffCoef c = tradeoff_coefficients(i, sc);
  const double head = 0.5 * std::sqrt(M_PI) / p_s_req;
  const double denom = head * std::exp(-c.a1 / system_bandwidth_hz) - 1.0;
  if (denom <= 0.0)
    throw InfeasibleBandwidth("bandwidth below the closed-form pole w_min");
  return (c.noise + c.a2 / system_bandwidth_hz) / denom;
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_iter) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

// Numeric-path reliability slack at a candidate provisioning point.
// Positive slack means the requirement holds.
double numeric_slack(const Scenario& cand, const IoTTypeSpec& t,
                     const ReliabilityRequirement& req,
                     const QuadratureSpec& spec) {
  if (req.kind == ReliabilityRequirement::Kind::CellEdgeSuccess) {
    const double deg = cell_edge_distance(cand.network.ap_density);
    return p_success_at(t, deg, cand, SuccessMethod::ClosedApprox, spec) -
           req.value;
  }
  const double ps =
      p_success_spatial_numeric(t, cand, SuccessMethod::ClosedApprox, spec);
  return req.value - outage(t, ps);
}

bool feasible_at(const Scenario& sc, double lambda_a, double w,
                 const ReliabilityRequirement& req, const QuadratureSpec& spec) {
  const Scenario cand = with_provisioning(sc, lambda_a, w);
  for (const auto& t : cand.types) {
    if (!t.in_phi) continue;
    if (numeric_slack(cand, t, req, spec) < 0.0) return false;
  }
  return true;
}

// Minimal feasible AP density at bandwidth w, by bisection on log density.
// Returns a negative value when even the cap is infeasible.
double min_density_numeric(const Scenario& sc, double w,
                           const ReliabilityRequirement& req,
                           const QuadratureSpec& spec) {
  const double lo_cap = 1e-12, hi_cap = 1e-2;
  double hi = std::max(sc.network.ap_density, 1e-8);
  while (!feasible_at(sc, hi, w, req, spec)) {
    hi *= 4.0;
    if (hi > hi_cap) return -1.0;
  }
  double lo = hi;
  while (feasible_at(sc, lo, w, req, spec) && lo > lo_cap) lo /= 4.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (feasible_at(sc, mid, w, req, spec))
      hi = mid;
    else
      lo = mid;
    if (hi / lo < 1.0 + 1e-6) break;
  }
  return hi;
}

}  // namespace

double provision_min_density(const Scenario& sc, double system_bandwidth_hz,
                             const ReliabilityRequirement& req,
                             const QuadratureSpec& spec) {
  return min_density_numeric(sc, system_bandwidth_hz, req, spec);
}

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const double decades = std::log10(hi / lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

}  // namespace

ProvisioningSolution provision_optimize(const Scenario& sc,
                                        const ReliabilityRequirement& req,
                                        std::pair<double, double> w_range_hz,
                                        ProvisionSolver solver,
                                        const QuadratureSpec& spec) {
  if (!(w_range_hz.first > 0.0 && w_range_hz.second > w_range_hz.first))
    throw std::domain_error("provision_optimize: empty bandwidth range");

  ProvisioningSolution sol;
  sol.method = solver;

  auto density_at = [&](double w) -> double {
    if (solver == ProvisionSolver::NumericBisection)
      return min_density_numeric(sc, w, req, spec);
    // Closed form: the spatial requirement enters through Eq.-(19)-style
    // conversion; the cell-edge variant feeds the target level directly.
    double worst = 0.0;
    for (const auto& t : sc.types) {
      if (!t.in_phi) continue;
      const double ps_req =
          req.kind == ReliabilityRequirement::Kind::SpatialOutage
              ? required_success(req.value, t.replicas, t.retx_bound)
              : req.value;
      try {
        worst = std::max(worst, lambda_a_of_w(w, t, sc, ps_req));
      } catch (const InfeasibleBandwidth&) {
        return -1.0;
      }
    }
    return worst;
  };
  auto cost_at = [&](double w) -> double {
    const double lam = density_at(w);
    if (lam <= 0.0) return kInf;
    return network_cost_at(sc, lam, w);
  };

  const auto grid = log_grid(w_range_hz.first, w_range_hz.second, 64);
  double best_w = 0.0, best_cost = kInf;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = cost_at(grid[i]);
    if (c < best_cost) {
      best_cost = c;
      best_w = grid[i];
      best_idx = i;
    }
  }
  if (!std::isfinite(best_cost)) {
    sol.feasible = false;
    return sol;
  }
  const double lo = grid[best_idx > 0 ? best_idx - 1 : 0];
  const double hi = grid[std::min(best_idx + 1, grid.size() - 1)];
  if (hi > lo)
    best_w = golden_section_min(cost_at, lo, hi, (hi - lo) * 1e-3);
  if (cost_at(best_w) > best_cost) best_w = grid[best_idx];

  sol.bandwidth_hz = best_w;
  sol.ap_density = density_at(best_w);
  sol.cost_per_year = network_cost_at(sc, sol.ap_density, sol.bandwidth_hz);

  // Both solvers are re-verified on the numeric reliability path.
  const Scenario final_sc = with_provisioning(sc, sol.ap_density, sol.bandwidth_hz);
  sol.feasible = true;
  for (const auto& t : final_sc.types) {
    if (!t.in_phi) continue;
    const double slack = numeric_slack(final_sc, t, req, spec);
    sol.constraint_slack.push_back({t.id, slack});
    if (slack < -1e-9) sol.feasible = false;
  }
  return sol;
}

int n_of_p(double tx_power_w, const IoTTypeSpec& i, const Scenario& sc,
           double p_o_req, int retx_bound, int n_max_cap) {
  const double ps = closed_ps_of_power(i, sc, tx_power_w);
  if (!(ps > 0.0 && ps < 1.0))
    throw Unsatisfiable("n_of_p: closed-form success probability out of (0,1)");
  const double n_real = std::log(p_o_req) / retx_bound / std::log(1.0 - ps);
  int n = std::max(1, static_cast<int>(std::ceil(n_real - 1e-12)));
  if (n_max_cap > 0 && n > n_max_cap)
    throw Unsatisfiable("n_of_p: no replica count within the cap meets the target");
  return n;
}

double p_min(const IoTTypeSpec& i, const Scenario& sc, double p_o_req,
             int n_max, int retx_bound) {
  const double s_req = required_success(p_o_req, n_max, retx_bound);
  const ClosedCoef c = closed_coefficients(i, sc);
  // Constraint in t = 1/sqrt(P):  noise_a t^2 + d1 t + (lap - d0/s) <= 0.
  const double cc = c.lap - c.d0 / s_req;
  if (cc >= 0.0)
    throw Infeasible("p_min: requirement above the interference-limited ceiling");
  if (c.noise_a <= 0.0) {
    if (c.d1 <= 0.0) return 0.0;  // constraint holds at any power
    const double t = -cc / c.d1;
    return 1.0 / (t * t);
  }
  const double disc = c.d1 * c.d1 - 4.0 * c.noise_a * cc;
  const double t_pos = (-c.d1 + std::sqrt(disc)) / (2.0 * c.noise_a);
  return 1.0 / (t_pos * t_pos);
}

double operation_success(const IoTTypeSpec& i, const Scenario& sc,
                         OperationMetric metric, const QuadratureSpec& spec) {
  if (metric == OperationMetric::CellEdge) {
    const double deg = cell_edge_distance(sc.network.ap_density);
    return p_success_at(i, deg, sc, SuccessMethod::ClosedApprox, spec);
  }
  return p_success_spatial_numeric(i, sc, SuccessMethod::ClosedApprox, spec);
}

OperationSolution operation_optimize(const Scenario& sc, double p_o_req,
                                     int n_max, double p_max_w,
                                     const QuadratureSpec& spec,
                                     OperationMetric metric) {
  if (n_max < 1 || !(p_max_w > 0.0))
    throw std::domain_error("operation_optimize: bad bounds");

  Scenario work = sc;
  OperationSolution sol;
  sol.feasible = true;

  auto evaluate = [&](const IoTTypeSpec& base, int n, double p_w,
                      double& lifetime, double& ps) -> bool {
    const Scenario cand = with_operation(work, base.id, n, p_w);
    const IoTTypeSpec& t = cand.type_by_id(base.id);
    ps = operation_success(t, cand, metric, spec);
    if (outage(t, ps) > p_o_req) return false;
    const double beta = expected_trials(ps, n, t.retx_bound);
    lifetime = lifetime_from_trials(t, cand.energy, beta);
    return true;
  };

  std::vector<OperationSolution::PerType> result;
  for (const auto& t : sc.types)
    if (t.in_phi) result.push_back({t.id, t.replicas, t.tx_power_w, 0.0, 0.0, false});

  for (int round = 0; round < 10; ++round) {
    bool changed = false;
    for (auto& entry : result) {
      const IoTTypeSpec& t = work.type_by_id(entry.type_id);
      double p_lo;
      try {
        p_lo = std::min(std::max(p_min(t, work, p_o_req, n_max, t.retx_bound),
                                 p_max_w * 1e-4),
                        p_max_w);
      } catch (const Infeasible&) {
        p_lo = p_max_w * 1e-4;  // closed form pessimistic; let the grid decide
      }

      // 0.5 dB power grid, then golden refinement at the winning n.
      std::vector<double> p_grid;
      const double lo_db = watt_to_dbm(p_lo), hi_db = watt_to_dbm(p_max_w);
      for (double db = lo_db; db < hi_db + 0.25; db += 0.5)
        p_grid.push_back(dbm_to_watt(std::min(db, hi_db)));
      if (p_grid.empty()) p_grid.push_back(p_max_w);

      double best_l = -1.0, best_p = entry.tx_power_w, best_ps = 0.0;
      int best_n = entry.replicas;
      for (double p_w : p_grid) {
        for (int n = 1; n <= n_max; ++n) {
          double lt, ps;
          if (!evaluate(t, n, p_w, lt, ps)) continue;
          if (lt > best_l) {
            best_l = lt;
            best_p = p_w;
            best_n = n;
            best_ps = ps;
          }
        }
      }
      if (best_l < 0.0) {
        entry.feasible = false;
        sol.feasible = false;
        continue;
      }
      // Refine power one grid step around the winner.
      const double step = dbm_to_watt(0.5) / dbm_to_watt(0.0);
      const double a = std::max(best_p / step, p_lo);
      const double b = std::min(best_p * step, p_max_w);
      if (b > a * (1.0 + 1e-9)) {
        const double refined = golden_section_min(
            [&](double p_w) {
              double lt, ps;
              return evaluate(t, best_n, p_w, lt, ps) ? -lt : kInf;
            },
            a, b, (b - a) * 1e-3);
        double lt, ps;
        if (evaluate(t, best_n, refined, lt, ps) && lt > best_l) {
          best_l = lt;
          best_p = refined;
          best_ps = ps;
        }
      }

      if (entry.replicas != best_n ||
          std::abs(entry.tx_power_w - best_p) > 1e-6 * best_p)
        changed = true;
      entry.replicas = best_n;
      entry.tx_power_w = best_p;
      entry.lifetime_s = best_l;
      entry.p_s = best_ps;
      entry.feasible = true;
      work = with_operation(work, entry.type_id, best_n, best_p);
    }
    if (!changed) break;
  }

  sol.types = std::move(result);
  for (const auto& e : sol.types) sol.feasible = sol.feasible && e.feasible;
  return sol;
}

}  // namespace lpwa
