#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "lpwa/lifetime.hpp"
#include "lpwa/mc.hpp"
#include "lpwa/reliability.hpp"

using namespace lpwa;
using lpwa::testutil::baseline;

TEST_CASE("deployment point counts have the right means") {
  Scenario sc = baseline();
  sc.cost.area_m2 = km2_to_m2(25.0);  // small area keeps the test fast
  sc.types[0].parent_density = per_km2_to_per_m2(4.0);
  sc.types[0].daughters_per_parent = 50.0;
  const double area = sc.cost.area_m2;
  const int reps = 200;
  double parents = 0.0, devices = 0.0, aps = 0.0;
  Rng rng(3);
  for (int r = 0; r < reps; ++r) {
    const Deployment d = sample_deployment(sc, rng);
    parents += d.types[0].parents.size();
    devices += d.types[0].devices.size();
    aps += d.aps.size();
  }
  parents /= reps;
  devices /= reps;
  aps /= reps;
  const double mp = sc.types[0].parent_density * area;  // 100
  const double md = mp * 50.0;                          // 5000
  const double ma = sc.network.ap_density * area;
  // Cluster counts are over-dispersed: var = m*(1+v) for daughters.
  CHECK(std::abs(parents - mp) < 4.0 * std::sqrt(mp / reps));
  CHECK(std::abs(devices - md) < 4.0 * std::sqrt(md * 51.0 / reps));
  CHECK(std::abs(aps - ma) < 4.0 * std::sqrt(std::max(ma, 1.0) / reps));

  Scenario childless = sc;
  childless.types[0].daughters_per_parent = 0.0;
  Rng rng2(4);
  CHECK(sample_deployment(childless, rng2).types[0].devices.empty());
}

TEST_CASE("daughter offsets follow the scattering law") {
  // For a plane Gaussian the squared radius is exponential; compare the
  // empirical CDF by a Kolmogorov-Smirnov distance.
  Scenario sc = baseline();
  sc.cost.area_m2 = km2_to_m2(100.0);
  sc.types[0].parent_density = per_km2_to_per_m2(2.0);
  Rng rng(5);
  const Deployment d = sample_deployment(sc, rng);
  const auto& tp = d.types[0];
  std::vector<double> u;
  const double sigma2 = 100.0 * 100.0;
  for (std::size_t i = 0; i < tp.devices.size(); ++i) {
    const double dist = d.torus_distance(tp.devices[i], tp.parents[tp.device_parent[i]]);
    u.push_back(1.0 - std::exp(-dist * dist / (2.0 * sigma2)));
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  const double n = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ks = std::max(ks, std::abs(u[i] - (i + 1) / n));
    ks = std::max(ks, std::abs(u[i] - i / n));
  }
  REQUIRE(u.size() > 10000);
  CHECK(ks < 1.63 / std::sqrt(n));  // 1% critical value
}

TEST_CASE("nearest AP distances are sorted and torus-consistent") {
  Scenario sc = baseline();
  sc.cost.area_m2 = km2_to_m2(100.0);
  sc.network.ap_density = per_km2_to_per_m2(1.0);
  Rng rng(6);
  const Deployment d = sample_deployment(sc, rng);
  const auto dist = nearest_ap_distances(d, {0.0, 0.0}, 4);
  REQUIRE(dist.size() == 4);
  CHECK(std::is_sorted(dist.begin(), dist.end()));
  CHECK(dist.front() >= 0.0);
  CHECK(dist.back() <= d.side_m);  // torus metric cannot exceed the side
}

TEST_CASE("snapshot success estimates are reproducible and worker independent") {
  const Scenario sc = baseline();
  const double radius = default_field_radius(sc);
  const auto a = estimate_ps_at(sc, sc.types[0], 1500.0, 20000, 17, radius, 1);
  const auto b = estimate_ps_at(sc, sc.types[0], 1500.0, 20000, 17, radius, 4);
  const auto c = estimate_ps_at(sc, sc.types[0], 1500.0, 20000, 17, radius, 8);
  CHECK(a.mean == b.mean);
  CHECK(b.mean == c.mean);
  CHECK(a.se == c.se);
  const auto other = estimate_ps_at(sc, sc.types[0], 1500.0, 20000, 18, radius, 1);
  CHECK(other.mean != a.mean);
}

TEST_CASE("snapshot estimate agrees with the Laplace-functional route") {
  const Scenario sc = baseline();
  const auto& t = sc.types[0];
  const QuadratureSpec spec = default_quadrature(sc);
  for (double z : {800.0, 2400.0}) {
    const auto mc = estimate_ps_at(sc, t, z, 60000, 23, default_field_radius(sc));
    const double exact = p_success_at(t, z, sc, SuccessMethod::ExactNumericM1, spec);
    CHECK(std::abs(exact - mc.mean) < 3.0 * mc.se);
  }
}

TEST_CASE("spatial snapshot agrees with the distance-integrated route") {
  const Scenario sc = baseline();
  const auto& t = sc.types[0];
  QuadratureSpec spec = default_quadrature(sc);
  spec.rel_tol = 1e-5;
  const auto mc = estimate_ps_spatial(sc, t, 60000, 29, default_field_radius(sc));
  const double exact =
      p_success_spatial_numeric(t, sc, SuccessMethod::ExactNumericM1, spec);
  CHECK(std::abs(exact - mc.mean) < 3.0 * mc.se);
}

TEST_CASE("laplace estimates decrease in s and are exact at s = 0") {
  const Scenario sc = baseline();
  const auto est = estimate_laplace(sc, sc.types[0], {0.0, 1e15, 1e16, 1e17},
                                    20000, 31, default_field_radius(sc));
  CHECK(est[0].mean == 1.0);
  CHECK(est[0].se == 0.0);
  for (std::size_t i = 1; i < est.size(); ++i) CHECK(est[i].mean < est[i - 1].mean);
}

TEST_CASE("interference-free replay always succeeds") {
  Scenario sc = baseline();
  sc.types[0].parent_density = 0.0;
  sc.types[0].daughters_per_parent = 0.0;
  sc.network.noise_density_w_hz = 0.0;
  const auto st = replay_protocol(sc, sc.types[0], 2000.0, 5000, 37,
                                  default_field_radius(sc),
                                  CampaignSpec::Overlap::FractionalOverlap);
  CHECK(st.replica_success.mean == 1.0);
  CHECK(st.episode_outage.mean == 0.0);
  CHECK(st.attempts_verbatim.mean == 1.0);
}

TEST_CASE("replay outage matches the independence formula") {
  const Scenario sc = baseline();
  const auto& t = sc.types[0];
  const double deg = cell_edge_distance(sc.network.ap_density);
  const auto st = replay_protocol(sc, t, deg, 60000, 41, default_field_radius(sc),
                                  CampaignSpec::Overlap::FractionalOverlap);
  const double p = st.replica_success.mean;
  const double predicted = std::pow(1.0 - p, double(t.replicas) * t.retx_bound);
  // Combine the outage-count noise with the propagated replica-rate noise.
  const double dpo = double(t.replicas) * t.retx_bound *
                     std::pow(1.0 - p, double(t.replicas) * t.retx_bound - 1);
  const double se = std::hypot(st.episode_outage.se, dpo * st.replica_success.se);
  CHECK(std::abs(st.episode_outage.mean - predicted) < 3.0 * se);

  // Attempt accounting matches the truncated-sum form.
  const double q = std::pow(1.0 - p, t.replicas);
  const double beta = expected_trials_from_attempt_failure(q, t.retx_bound);
  CHECK(std::abs(st.attempts_verbatim.mean - beta) <
        3.0 * (st.attempts_verbatim.se + 2.0 * st.replica_success.se));
  CHECK(st.attempts_capped.mean >= st.attempts_verbatim.mean);
}

TEST_CASE("hard-collision replay is more pessimistic than fractional overlap") {
  const Scenario sc = baseline();
  const auto& t = sc.types[0];
  const double deg = cell_edge_distance(sc.network.ap_density);
  const auto frac = replay_protocol(sc, t, deg, 30000, 43, default_field_radius(sc),
                                    CampaignSpec::Overlap::FractionalOverlap);
  const auto hard = replay_protocol(sc, t, deg, 30000, 43, default_field_radius(sc),
                                    CampaignSpec::Overlap::HardCollision);
  CHECK(hard.replica_success.mean < frac.replica_success.mean);
}

TEST_CASE("lifetime population brackets the analytic average") {
  Scenario sc = baseline();
  sc.cost.area_m2 = km2_to_m2(100.0);
  sc.types[0].parent_density = per_km2_to_per_m2(0.4);
  const auto& t = sc.types[0];
  const QuadratureSpec spec = default_quadrature(sc);
  const auto pop = lifetime_population(sc, t, 47, spec);
  REQUIRE(pop.lifetimes_s.size() > 100);
  const auto sibl = application_lifetime(t, sc, LifetimeDefinition::SIBL, &pop);
  const auto libl = application_lifetime(t, sc, LifetimeDefinition::LIBL, &pop);
  const auto aibl = application_lifetime(t, sc, LifetimeDefinition::AIBL, nullptr,
                                         SuccessMethod::ClosedApprox, spec);
  CHECK(sibl.lifetime_s <= aibl.lifetime_s);
  CHECK(aibl.lifetime_s <= libl.lifetime_s);
}

TEST_CASE("campaign is deterministic for a fixed seed across worker counts") {
  Scenario sc = baseline();
  CampaignSpec spec;
  spec.seed = 99;
  spec.z_bins_m = {500.0, 1500.0};
  spec.snapshot_episodes = 4000;
  spec.replay_episodes = 2000;
  spec.laplace_s_grid = {1e15, 1e16};
  spec.workers = 1;
  const auto a = run_campaign(sc, spec);
  spec.workers = 4;
  const auto b = run_campaign(sc, spec);
  REQUIRE(a.types.size() == b.types.size());
  for (std::size_t i = 0; i < a.types.size(); ++i) {
    for (std::size_t j = 0; j < a.types[i].ps_by_z.size(); ++j)
      CHECK(a.types[i].ps_by_z[j].mean == b.types[i].ps_by_z[j].mean);
    CHECK(a.types[i].ps_spatial.mean == b.types[i].ps_spatial.mean);
    CHECK(a.types[i].replay_outage.mean == b.types[i].replay_outage.mean);
    CHECK(a.types[i].attempts_verbatim.mean == b.types[i].attempts_verbatim.mean);
    for (std::size_t j = 0; j < a.types[i].laplace.size(); ++j)
      CHECK(a.types[i].laplace[j].mean == b.types[i].laplace[j].mean);
    CHECK(a.types[i].sibl_s == b.types[i].sibl_s);
    CHECK(a.types[i].libl_s == b.types[i].libl_s);
  }
}
