#include "lpwa/presets.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lpwa/geometry.hpp"
#include "lpwa/lifetime.hpp"
#include "lpwa/mc.hpp"
#include "lpwa/scenario_io.hpp"
#include "lpwa/units.hpp"

namespace lpwa {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  Csv& field(double v) { return field_str(fmt(v)); }
  Csv& field(int v) { return field_str(std::to_string(v)); }
  Csv& field(const std::string& s) { return field_str(s); }
  void end_row() {
    out_ << "\n";
    first_ = true;
  }

 private:
  Csv& field_str(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  std::ofstream out_;
  bool first_ = true;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return v;
}

struct Manifest {
  std::string preset;
  std::uint64_t seed;
  std::string method;
  int workers;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::filesystem::path& dir, int exit_code) const {
    nlohmann::json j;
    j["tool"] = "lpwa-plan";
    j["version"] = kVersion;
    j["preset"] = preset;
    j["seed"] = seed;
    j["method"] = method;
    j["workers"] = workers;
    j["exit_code"] = exit_code;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << "\n";
  }
};

int run_validate(const Scenario& sc, const std::filesystem::path& dir,
                 const RunOptions& opt, std::uint64_t seed) {
  const int episodes = opt.episodes > 0 ? opt.episodes : 100000;
  const double radius = default_field_radius(sc);
  const QuadratureSpec qspec = default_quadrature(sc);
  const auto z_grid = linspace(100.0, 3000.0, 30);

  Csv csv(dir / "validate.csv",
          {"z_m", "type", "p_s_closed", "p_s_numeric", "p_s_mc", "mc_se"});
  for (const auto& t : sc.types) {
    if (!t.in_phi) continue;
    for (std::size_t b = 0; b < z_grid.size(); ++b) {
      const double z = z_grid[b];
      const double closed =
          p_success_at(t, z, sc, SuccessMethod::ClosedApprox, qspec);
      const double numeric =
          p_success_at(t, z, sc, SuccessMethod::ExactNumericM1, qspec);
      const auto mc = estimate_ps_at(sc, t, z, episodes,
                                     seed ^ (t.id * 1000003ULL + b), radius,
                                     opt.workers);
      csv.field(z).field(t.id).field(closed).field(numeric).field(mc.mean)
          .field(mc.se);
      csv.end_row();
    }
  }
  return 0;
}

int run_tradeoff(const Scenario& sc, const std::filesystem::path& dir,
                 const RunOptions& opt) {
  const QuadratureSpec qspec = default_quadrature(sc);
  const double base = per_m2_to_per_km2(sc.network.ap_density);
  const auto grid = logspace(base / 8.0, base * 16.0, 25);
  Csv csv(dir / "tradeoff.csv",
          {"lambda_a_per_km2", "cost", "lifetime_s", "P_s", "P_o", "type",
           "method"});
  for (double lam_km2 : grid) {
    const Scenario cand = with_provisioning(sc, per_km2_to_per_m2(lam_km2),
                                            sc.network.system_bandwidth_hz);
    const double cost = network_cost(cand);
    for (const auto& t : cand.types) {
      if (!t.in_phi) continue;
      const double ps =
          p_success_spatial_numeric(t, cand, SuccessMethod::ClosedApprox, qspec);
      const double po = outage(t, ps);
      const double beta = expected_trials(ps, t.replicas, t.retx_bound);
      const double life = lifetime_from_trials(t, cand.energy, beta);
      csv.field(lam_km2).field(cost).field(life).field(ps).field(po)
          .field(t.id).field("numeric");
      csv.end_row();
    }
  }
  return 0;
}

int run_provision(const Scenario& sc, const std::filesystem::path& dir,
                  const RunOptions& opt) {
  const QuadratureSpec qspec = default_quadrature(sc);
  const ProvisionSolver solver = opt.method == "closed"
                                     ? ProvisionSolver::ClosedForm
                                     : ProvisionSolver::NumericBisection;
  auto w_range = opt.w_range_hz;
  if (w_range.first <= 0.0)
    w_range = {sc.network.system_bandwidth_hz / 10.0,
               sc.network.system_bandwidth_hz * 10.0};
  const char* tag = solver == ProvisionSolver::ClosedForm ? "closed" : "numeric";

  Csv csv(dir / "provision.csv",
          {"W_hz", "lambda_a_min_per_km2", "cost", "feasible", "method"});
  const auto grid = logspace(w_range.first, w_range.second, 65);
  for (double w : grid) {
    double lam = -1.0;
    try {
      if (solver == ProvisionSolver::ClosedForm) {
        for (const auto& t : sc.types) {
          if (!t.in_phi) continue;
          const double ps_req =
              opt.requirement.kind == ReliabilityRequirement::Kind::SpatialOutage
                  ? required_success(opt.requirement.value, t.replicas,
                                     t.retx_bound)
                  : opt.requirement.value;
          lam = std::max(lam, lambda_a_of_w(w, t, sc, ps_req));
        }
      } else {
        lam = provision_min_density(sc, w, opt.requirement, qspec);
      }
    } catch (const Infeasible&) {
      lam = -1.0;
    }
    const bool ok = lam > 0.0;
    csv.field(w).field(ok ? per_m2_to_per_km2(lam) : 0.0)
        .field(ok ? network_cost_at(sc, lam, w) : 0.0)
        .field(ok ? 1 : 0).field(tag);
    csv.end_row();
  }

  const ProvisioningSolution sol =
      provision_optimize(sc, opt.requirement, w_range, solver, qspec);
  Csv best(dir / "provision_opt.csv",
           {"W_hz", "lambda_a_per_km2", "cost", "feasible", "method"});
  best.field(sol.bandwidth_hz).field(per_m2_to_per_km2(sol.ap_density))
      .field(sol.cost_per_year).field(sol.feasible ? 1 : 0).field(tag);
  best.end_row();
  return sol.feasible ? 0 : 2;
}

namespace {
const IoTTypeSpec& first_served(const Scenario& sc) {
  for (const auto& t : sc.types)
    if (t.in_phi) return t;
  throw std::invalid_argument("no served types");
}
}  // namespace

int run_operate(const Scenario& sc, const std::filesystem::path& dir,
                const RunOptions& opt) {
  const QuadratureSpec qspec = default_quadrature(sc);
  const IoTTypeSpec& first = first_served(sc);
  const double p_default = first.tx_power_w;
  const double p_max = opt.p_max_w > 0.0 ? opt.p_max_w : p_default;
  const double p_o_req =
      opt.requirement.kind == ReliabilityRequirement::Kind::SpatialOutage
          ? opt.requirement.value
          : 0.05;

  std::vector<std::string> header{"P_w", "n", "lifetime_s"};
  for (const auto& t : sc.types) header.push_back("p_s_type" + std::to_string(t.id));
  header.push_back("lifetime_spatial_s");
  header.push_back("method");
  Csv csv(dir / "operate.csv", header);

  auto emit = [&](int n, double p_w) {
    const Scenario cand = with_operation(sc, first.id, n, p_w);
    const IoTTypeSpec& t = cand.type_by_id(first.id);
    // Lifetime curve at the cell-edge reliability metric (the evaluation
    // studies state their requirement at d_eg), plus the spatial variant.
    const double ps_ce = operation_success(t, cand, OperationMetric::CellEdge, qspec);
    const double beta_ce = expected_trials(ps_ce, n, t.retx_bound);
    csv.field(p_w).field(n).field(lifetime_from_trials(t, cand.energy, beta_ce));
    for (const auto& k : cand.types)
      csv.field(operation_success(k, cand, OperationMetric::CellEdge, qspec));
    const double ps_sp =
        p_success_spatial_numeric(t, cand, SuccessMethod::ClosedApprox, qspec);
    const double beta_sp = expected_trials(ps_sp, n, t.retx_bound);
    csv.field(lifetime_from_trials(t, cand.energy, beta_sp));
    csv.field("numeric");
    csv.end_row();
  };

  // Replica sweep at the default power, then power sweep at n = 1.
  for (int n = 1; n <= opt.n_max; ++n) emit(n, p_default);
  for (double db = watt_to_dbm(p_max) - 15.0; db <= watt_to_dbm(p_max) + 0.01;
       db += 1.0)
    emit(1, dbm_to_watt(db));

  OperationSolution sol;
  int code = 0;
  try {
    sol = operation_optimize(sc, p_o_req, opt.n_max, p_max, qspec);
  } catch (const Infeasible&) {
    code = 2;
  }
  Csv best(dir / "operate_opt.csv",
           {"type", "n_opt", "P_w_opt", "lifetime_s", "P_s", "feasible"});
  for (const auto& e : sol.types) {
    best.field(e.type_id).field(e.replicas).field(e.tx_power_w)
        .field(e.lifetime_s).field(e.p_s).field(e.feasible ? 1 : 0);
    best.end_row();
  }
  if (!sol.feasible) code = 2;
  return code;
}

int run_scale(const Scenario& sc, const std::filesystem::path& dir,
              const RunOptions& opt) {
  const QuadratureSpec qspec = default_quadrature(sc);
  const IoTTypeSpec& first = first_served(sc);

  // Swept axis: required cell-edge success by default, or a parameter path.
  std::vector<double> grid = opt.sweep_grid;
  const bool sweep_requirement = opt.sweep_path.empty();
  if (grid.empty())
    grid = sweep_requirement ? linspace(0.1, 0.9, 17)
                             : logspace(0.5, 8.0, 9);

  Csv csv(dir / "scale.csv",
          {"swept_value", "required_P_w", "required_n", "required_lambda_a_per_km2",
           "required_W_hz", "method"});

  auto cell_edge_ps = [&](const Scenario& cand) {
    const double deg = cell_edge_distance(cand.network.ap_density);
    return p_success_at(cand.type_by_id(first.id), deg, cand,
                        SuccessMethod::ClosedApprox, qspec);
  };

  for (double x : grid) {
    Scenario base = sc;
    double target = opt.requirement.value;
    if (sweep_requirement)
      target = x;
    else
      set_parameter(base, opt.sweep_path, x);

    // Required power: bisection on P over [default/1000, default*1000].
    auto ps_at_power = [&](double p_w) {
      const Scenario cand = with_operation(base, first.id, first.replicas, p_w);
      return cell_edge_ps(cand);
    };
    double req_p = std::nan("");
    {
      const double lo = first.tx_power_w * 1e-3, hi = first.tx_power_w * 1e3;
      if (ps_at_power(hi) >= target) {
        double a = lo, b = hi;
        if (ps_at_power(lo) >= target) b = lo;
        for (int i = 0; i < 60 && b > a * (1 + 1e-9); ++i) {
          const double mid = std::sqrt(a * b);
          (ps_at_power(mid) >= target ? b : a) = mid;
        }
        req_p = b;
      }
    }

    // Required replicas (replicas raise own-type activity as they help).
    double req_n = std::nan("");
    for (int n = 1; n <= 64; ++n) {
      const Scenario cand = with_operation(base, first.id, n, first.tx_power_w);
      const double att = 1.0 - std::pow(1.0 - cell_edge_ps(cand), n);
      if (att >= target) {
        req_n = n;
        break;
      }
    }

    // Required AP density.
    auto ps_at_density = [&](double lam) {
      const Scenario cand =
          with_provisioning(base, lam, base.network.system_bandwidth_hz);
      return cell_edge_ps(cand);
    };
    double req_lam = std::nan("");
    {
      double a = base.network.ap_density * 1e-3, b = base.network.ap_density * 1e4;
      if (ps_at_density(b) >= target) {
        for (int i = 0; i < 60 && b > a * (1 + 1e-9); ++i) {
          const double mid = std::sqrt(a * b);
          (ps_at_density(mid) >= target ? b : a) = mid;
        }
        req_lam = per_m2_to_per_km2(b);
      }
    }

    // Required bandwidth.
    auto ps_at_w = [&](double w) {
      const Scenario cand = with_provisioning(base, base.network.ap_density, w);
      return cell_edge_ps(cand);
    };
    double req_w = std::nan("");
    {
      double a = sc.network.system_bandwidth_hz / 100.0;
      double b = sc.network.system_bandwidth_hz * 1000.0;
      a = std::max(a, 1.0);
      for (const auto& t : base.types) a = std::max(a, t.signal_bandwidth_hz);
      if (ps_at_w(b) >= target) {
        for (int i = 0; i < 60 && b > a * (1 + 1e-9); ++i) {
          const double mid = std::sqrt(a * b);
          (ps_at_w(mid) >= target ? b : a) = mid;
        }
        req_w = b;
      }
    }

    csv.field(x).field(req_p).field(req_n).field(req_lam).field(req_w)
        .field("closed");
    csv.end_row();
  }
  return 0;
}

int run_sweep(const Scenario& sc, const std::filesystem::path& dir,
              const RunOptions& opt) {
  if (opt.sweep_path.empty() || opt.sweep_grid.empty())
    throw std::invalid_argument("sweep preset needs a parameter path and grid");
  const QuadratureSpec qspec = default_quadrature(sc);
  Csv csv(dir / "sweep.csv",
          {"swept_value", "cost", "lifetime_s", "P_s", "P_o", "type", "method"});
  for (double x : opt.sweep_grid) {
    Scenario cand = sc;
    set_parameter(cand, opt.sweep_path, x);
    const double cost = network_cost(cand);
    for (const auto& t : cand.types) {
      if (!t.in_phi) continue;
      const double ps =
          p_success_spatial_numeric(t, cand, SuccessMethod::ClosedApprox, qspec);
      const double beta = expected_trials(ps, t.replicas, t.retx_bound);
      csv.field(x).field(cost).field(lifetime_from_trials(t, cand.energy, beta))
          .field(ps).field(outage(t, ps)).field(t.id).field("numeric");
      csv.end_row();
    }
  }
  return 0;
}

}  // namespace

Preset preset_from_name(const std::string& name) {
  if (name == "validate") return Preset::Validate;
  if (name == "tradeoff") return Preset::Tradeoff;
  if (name == "provision") return Preset::ProvisionMap;
  if (name == "operate") return Preset::Operate;
  if (name == "scale") return Preset::Scale;
  if (name == "sweep") return Preset::Sweep;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

int run_preset(const Scenario& sc, Preset preset, const std::string& out_dir,
               const RunOptions& opt) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  const std::uint64_t seed = opt.seed.value_or(sc.rng_seed);

  Manifest manifest;
  manifest.seed = seed;
  manifest.method = opt.method.empty() ? "numeric" : opt.method;
  manifest.workers = resolve_workers(opt.workers);

  int code = 1;
  try {
    switch (preset) {
      case Preset::Validate:
        manifest.preset = "validate";
        code = run_validate(sc, dir, opt, seed);
        break;
      case Preset::Tradeoff:
        manifest.preset = "tradeoff";
        code = run_tradeoff(sc, dir, opt);
        break;
      case Preset::ProvisionMap:
        manifest.preset = "provision";
        code = run_provision(sc, dir, opt);
        break;
      case Preset::Operate:
        manifest.preset = "operate";
        code = run_operate(sc, dir, opt);
        break;
      case Preset::Scale:
        manifest.preset = "scale";
        code = run_scale(sc, dir, opt);
        break;
      case Preset::Sweep:
        manifest.preset = "sweep";
        code = run_sweep(sc, dir, opt);
        break;
    }
  } catch (...) {
    manifest.write(dir, 1);
    throw;
  }
  manifest.write(dir, code);
  return code;
}

}  // namespace lpwa
