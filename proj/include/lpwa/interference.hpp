#pragma once

#include "lpwa/quadrature.hpp"
#include "lpwa/scenario.hpp"

namespace lpwa {

// Mean number of simultaneously interfering devices per cluster, split by
// code relation to the probe: same_code carries weight Q1 = 1, cross_code
// carries the rejection factor Q2 = Q.  Types outside phi never share a
// code, so their whole activity mass sits in cross_code.
struct ActivityFactors {
  double same_code = 0.0;
  double cross_code = 0.0;
  double total() const { return same_code + cross_code; }
};

ActivityFactors activity_factors(const IoTTypeSpec& t, const NetworkConfig& net);

// Code-domain interference weights: Q1 for same-code, Q2 for cross-code.
inline double code_weight(const NetworkConfig& net, int j) {
  return j == 0 ? 1.0 : net.rejection_factor;
}

struct LaplaceOptions {
  // Tabulate the per-cluster inner integral on a radial grid and
  // interpolate; the direct nested quadrature is the reference path.
  bool interpolate_inner = true;
  int inner_grid_points = 384;
};

// Laplace functional of the interference from clusters other than the
// probe's own, truncated at the spec radius.
double laplace_outer(double s, const Scenario& sc, const QuadratureSpec& spec,
                     const LaplaceOptions& opt = {});

// Intra-cluster term for a probe of the given type.
double laplace_inner(double s, const IoTTypeSpec& probe, const Scenario& sc,
                     const QuadratureSpec& spec, const LaplaceOptions& opt = {});

double laplace_total(double s, const IoTTypeSpec& probe, const Scenario& sc,
                     const QuadratureSpec& spec, const LaplaceOptions& opt = {});

}  // namespace lpwa
