#pragma once

#include "lpwa/optimize.hpp"
#include "lpwa/reliability.hpp"
#include "lpwa/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpwa {

enum class Preset { Validate, Tradeoff, ProvisionMap, Operate, Scale, Sweep };

Preset preset_from_name(const std::string& name);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  // "closed" opts the provisioning preset into the closed-form solver;
  // everything else runs the authoritative numeric routes.
  std::string method;
  int episodes = 0;  // 0 -> preset default
  int workers = 0;
  // Reliability requirement for provisioning/operation/scale presets.
  ReliabilityRequirement requirement{
      ReliabilityRequirement::Kind::CellEdgeSuccess, 0.5};
  int n_max = 8;
  double p_max_w = 0.0;  // 0 -> scenario default power
  std::pair<double, double> w_range_hz{0.0, 0.0};  // 0 -> derived default
  // Sweep preset inputs.
  std::string sweep_path;
  std::vector<double> sweep_grid;
};

// Exit status: 0 ok, 1 error, 2 infeasible optimization.
int run_preset(const Scenario& sc, Preset preset, const std::string& out_dir,
               const RunOptions& opt);

}  // namespace lpwa
