#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpwa/presets.hpp"
#include "lpwa/scenario_io.hpp"
#include "lpwa/units.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lpwa-plan: grant-free LPWA IoT network planning toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string method;
  int episodes = 0;
  int workers = 0;
  double ps_deg_req = 0.5;
  double po_req = 0.0;
  int n_max = 8;
  double p_max_dbm = 0.0;
  double w_lo = 0.0, w_hi = 0.0;
  std::string sweep_path;
  std::vector<double> sweep_grid;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "RNG seed override")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--method", method, "closed|numeric|mc");
    cmd->add_option("--reps", episodes, "Monte Carlo episodes per estimate");
    cmd->add_option("--workers", workers, "worker threads (0 = auto)");
    cmd->add_option("--ps-deg", ps_deg_req,
                    "required success probability at the cell edge");
    cmd->add_option("--po-req", po_req, "spatial outage cap (overrides --ps-deg)");
    cmd->add_option("--n-max", n_max, "replica bound for operation control");
    cmd->add_option("--p-max-dbm", p_max_dbm, "power cap for operation control");
    cmd->add_option("--w-min", w_lo, "bandwidth range low (Hz)");
    cmd->add_option("--w-max", w_hi, "bandwidth range high (Hz)");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "analytic vs MC success curves");
  CLI::App* c_tradeoff = app.add_subcommand("tradeoff", "cost/lifetime/reliability vs AP density");
  CLI::App* c_provision = app.add_subcommand("provision", "cost-minimal (lambda_a, W)");
  CLI::App* c_operate = app.add_subcommand("operate", "lifetime-optimal (P, n)");
  CLI::App* c_scale = app.add_subcommand("scale", "required resources vs load/reliability");
  CLI::App* c_sweep = app.add_subcommand("sweep", "free-form parameter sweep");
  for (CLI::App* c : {c_validate, c_tradeoff, c_provision, c_operate, c_scale, c_sweep})
    add_common(c);
  c_scale->add_option("--param", sweep_path, "parameter path to sweep");
  c_scale->add_option("--grid", sweep_grid, "explicit sweep grid");
  c_sweep->add_option("--param", sweep_path, "parameter path to sweep")->required();
  c_sweep->add_option("--grid", sweep_grid, "explicit sweep grid")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const lpwa::Scenario sc = lpwa::load_scenario(scenario_path);

    lpwa::RunOptions opt;
    if (seed_set) opt.seed = seed;
    if (!method.empty() && method != "closed" && method != "numeric" && method != "mc")
      throw std::invalid_argument("unknown method '" + method + "'");
    opt.method = method;
    opt.episodes = episodes;
    opt.workers = workers;
    if (po_req > 0.0)
      opt.requirement = {lpwa::ReliabilityRequirement::Kind::SpatialOutage, po_req};
    else
      opt.requirement = {lpwa::ReliabilityRequirement::Kind::CellEdgeSuccess,
                         ps_deg_req};
    opt.n_max = n_max;
    if (p_max_dbm != 0.0) opt.p_max_w = lpwa::dbm_to_watt(p_max_dbm);
    if (w_lo > 0.0 && w_hi > w_lo) opt.w_range_hz = {w_lo, w_hi};
    opt.sweep_path = sweep_path;
    opt.sweep_grid = sweep_grid;

    lpwa::Preset preset = lpwa::preset_from_name(app.get_subcommands().front()->get_name());
    const int code = lpwa::run_preset(sc, preset, out_dir, opt);
    if (code == 2) std::fprintf(stderr, "infeasible: no provisioning/operating point satisfies the requirement\n");
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
