#pragma once

#include "lpwa/geometry.hpp"
#include "lpwa/lifetime.hpp"
#include "lpwa/quadrature.hpp"
#include "lpwa/rng.hpp"
#include "lpwa/scenario.hpp"

#include <cstdint>
#include <vector>

namespace lpwa {

// Point pattern of one scenario realization on a square torus.
struct Deployment {
  struct TypePoints {
    int type_id = 0;
    std::vector<Point2D> parents;
    std::vector<Point2D> devices;
    std::vector<std::uint32_t> device_parent;
  };
  std::vector<TypePoints> types;
  std::vector<Point2D> aps;
  double side_m = 0.0;

  double torus_distance(const Point2D& a, const Point2D& b) const;
};

Deployment sample_deployment(const Scenario& sc, Rng& rng);

// Distances from a point to the ell_max nearest APs (torus metric).
std::vector<double> nearest_ap_distances(const Deployment& d, const Point2D& p,
                                         int ell_max);

struct BinomialEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
};

struct LaplaceEstimate {
  double s = 0.0;
  double mean = 1.0;
  double se = 0.0;
};

struct CampaignSpec {
  int replications = 50;            // deployments for population statistics
  double horizon_s = 3000.0;        // replay horizon per replication
  std::vector<double> z_bins_m;     // conditional success study distances
  std::uint64_t seed = 1;
  enum class Overlap { FractionalOverlap, HardCollision };
  Overlap overlap = Overlap::FractionalOverlap;
  int snapshot_episodes = 20000;    // per z-bin and per spatial study
  int replay_episodes = 20000;      // protocol episodes at the probe point
  double probe_distance_m = 0.0;    // 0 -> cell-edge distance
  std::vector<double> laplace_s_grid;
  double field_radius_m = 0.0;      // 0 -> service-area diagonal
  int workers = 0;                  // 0 -> LPWA_PLAN_THREADS or hardware
};

struct CampaignResult {
  struct TypeResult {
    int type_id = 0;
    std::vector<double> z_bins_m;
    std::vector<BinomialEstimate> ps_by_z;    // snapshot episodes per bin
    BinomialEstimate ps_spatial;              // snapshot, d_l resampled
    double probe_distance_m = 0.0;
    BinomialEstimate replay_replica_success;  // per-replica, fixed probe
    BinomialEstimate replay_outage;           // episode outage, fixed probe
    MeanEstimate attempts_verbatim;           // mean of j * 1{success}
    MeanEstimate attempts_capped;             // mean of min(attempts, B)
    std::vector<LaplaceEstimate> laplace;
    LifetimePopulation lifetimes;
    double sibl_s = 0.0;
    double libl_s = 0.0;
  };
  std::vector<TypeResult> types;
  std::uint64_t seed = 0;
};

// Snapshot oracles: sample the interference model exactly as the
// analytic formulas describe it (activity-thinned clusters at full code
// weight, the probe's own cluster scattered around its AP).
BinomialEstimate estimate_ps_at(const Scenario& sc, const IoTTypeSpec& probe,
                                double z_m, int episodes, std::uint64_t seed,
                                double field_radius_m, int workers = 0);

BinomialEstimate estimate_ps_spatial(const Scenario& sc, const IoTTypeSpec& probe,
                                     int episodes, std::uint64_t seed,
                                     double field_radius_m, int workers = 0);

std::vector<LaplaceEstimate> estimate_laplace(const Scenario& sc,
                                              const IoTTypeSpec& probe,
                                              const std::vector<double>& s_grid,
                                              int episodes, std::uint64_t seed,
                                              double field_radius_m,
                                              int workers = 0);

// Protocol replay at a fixed probe distance: full retransmission state
// machine with asynchronous time-frequency overlap weighting; the
// interference realization is redrawn per replica so replica outcomes
// are independent, matching the assumption behind the outage formula.
struct ReplayStats {
  BinomialEstimate replica_success;
  BinomialEstimate episode_outage;
  MeanEstimate attempts_verbatim;
  MeanEstimate attempts_capped;
};

ReplayStats replay_protocol(const Scenario& sc, const IoTTypeSpec& probe,
                            double z_m, int episodes, std::uint64_t seed,
                            double field_radius_m, CampaignSpec::Overlap overlap,
                            int workers = 0);

// Per-device lifetimes over one sampled deployment.
LifetimePopulation lifetime_population(const Scenario& sc, const IoTTypeSpec& t,
                                       std::uint64_t seed,
                                       const QuadratureSpec& spec = {});

CampaignResult run_campaign(const Scenario& sc, const CampaignSpec& spec);

// Worker resolution honoring LPWA_PLAN_THREADS.
int resolve_workers(int requested);

// Service-area diagonal, the default truncation/field radius.
double default_field_radius(const Scenario& sc);
QuadratureSpec default_quadrature(const Scenario& sc);

}  // namespace lpwa
