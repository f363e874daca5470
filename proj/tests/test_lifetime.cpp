#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "lpwa/lifetime.hpp"
#include "lpwa/rng.hpp"

using namespace lpwa;
using lpwa::testutil::baseline;

TEST_CASE("expected trials closed values") {
  CHECK(expected_trials(1.0, 1, 5) == doctest::Approx(1.0));
  CHECK(expected_trials(0.0, 1, 5) == doctest::Approx(0.0));
  CHECK(expected_trials(0.5, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : {0.05, 0.3, 0.8})
    for (int n : {1, 2, 4})
      for (int b : {1, 3, 8}) {
        const double beta = expected_trials(p, n, b);
        CHECK(beta >= 0.0);
        CHECK(beta <= b);
      }
  CHECK_THROWS_AS(expected_trials(1.2, 1, 1), std::domain_error);
  CHECK_THROWS_AS(expected_trials(0.5, 0, 1), std::domain_error);
}

TEST_CASE("expected trials matches a protocol replay of its own definition") {
  // Replays the retransmission state machine and accumulates the
  // success-weighted attempt index, exactly as the formula weights it.
  const double p = 0.35;
  const int n = 2, b = 5;
  const double q = std::pow(1.0 - p, n);
  Rng rng(2024);
  const int episodes = 1000000;
  double sum = 0.0, sum_sq = 0.0, sum_capped = 0.0;
  for (int e = 0; e < episodes; ++e) {
    int used = 0;
    bool ok = false;
    for (int j = 1; j <= b && !ok; ++j) {
      used = j;
      ok = rng.uniform() > q;  // attempt succeeds unless all replicas fail
    }
    const double verbatim = ok ? used : 0.0;
    sum += verbatim;
    sum_sq += verbatim * verbatim;
    sum_capped += used;
  }
  const double mean = sum / episodes;
  const double se = std::sqrt((sum_sq / episodes - mean * mean) / episodes);
  CHECK(std::abs(mean - expected_trials(p, n, b)) < 3.0 * se);
  // The capped attempt count differs: the truncated sum drops the
  // all-fail mass by construction.
  CHECK(sum_capped / episodes > mean);
}

TEST_CASE("device lifetime under forced success") {
  Scenario sc = baseline();
  sc.types[0].parent_density = 0.0;  // no interference
  sc.types[0].daughters_per_parent = 0.0;  // not even cluster mates
  sc.network.noise_density_w_hz = 0.0;
  sc.types[0].tx_power_w = 0.126;
  const auto res = device_lifetime(sc.types[0], {1000.0}, sc);
  CHECK(res.expected_trials == doctest::Approx(1.0).epsilon(1e-12));
  const double denom = 0.1 + 0.2 + (0.5 * 0.126 + 0.010) * 0.1;
  CHECK(res.lifetime_s ==
        doctest::Approx(1000.0 * 300.0 / denom).epsilon(1e-12));
  CHECK(res.lifetime_s == doctest::Approx(9.76e5).epsilon(1e-3));
}

TEST_CASE("device lifetime scaling") {
  Scenario sc = baseline();
  const std::vector<double> d{1200.0};
  const double base = device_lifetime(sc.types[0], d, sc).lifetime_s;
  Scenario heavy = sc;
  heavy.energy.static_per_period_j = 1e9;
  CHECK(device_lifetime(heavy.types[0], d, heavy).lifetime_s < 1e-3 * base);
  Scenario doubled = sc;
  doubled.energy.stored_j *= 2.0;
  CHECK(device_lifetime(doubled.types[0], d, doubled).lifetime_s ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK_THROWS_AS(device_lifetime(sc.types[0], {}, sc), std::domain_error);
}

TEST_CASE("application lifetime definitions") {
  Scenario sc = baseline();
  sc.types[0].parent_density = 0.0;
  sc.types[0].daughters_per_parent = 0.0;
  sc.network.noise_density_w_hz = 0.0;
  sc.types[0].tx_power_w = 0.126;
  const auto aibl = application_lifetime(sc.types[0], sc, LifetimeDefinition::AIBL);
  const auto dev = device_lifetime(sc.types[0], {500.0}, sc);
  CHECK(aibl.lifetime_s == doctest::Approx(dev.lifetime_s).epsilon(1e-9));

  CHECK_THROWS_AS(
      application_lifetime(sc.types[0], sc, LifetimeDefinition::SIBL),
      MissingPopulation);

  LifetimePopulation pop;
  pop.lifetimes_s = {3.0e5, 9.0e5, 6.5e5};
  CHECK(application_lifetime(sc.types[0], sc, LifetimeDefinition::SIBL, &pop)
            .lifetime_s == doctest::Approx(3.0e5));
  CHECK(application_lifetime(sc.types[0], sc, LifetimeDefinition::LIBL, &pop)
            .lifetime_s == doctest::Approx(9.0e5));
}

TEST_CASE("half success with a single replica and two attempts") {
  // beta-hat at these numbers is exactly one, so the lifetime equals the
  // forced-success value.
  const double beta = expected_trials(0.5, 1, 2);
  CHECK(beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("AP energy per unit time") {
  Scenario sc = baseline();
  Scenario idle = sc;
  idle.types[0].in_phi = false;
  CHECK(ap_energy_per_time(idle) == doctest::Approx(0.5));
  const double load = per_km2_to_per_m2(1.6) * 200.0 / (5.5e-8 * 300.0);
  CHECK(ap_energy_per_time(sc) == doctest::Approx(0.5 + 1.5 * load).epsilon(1e-12));
  Scenario dense = sc;
  dense.network.ap_density *= 2.0;
  CHECK(ap_energy_per_time(dense) - 0.5 ==
        doctest::Approx(0.5 * (ap_energy_per_time(sc) - 0.5)).epsilon(1e-12));
}

TEST_CASE("network cost") {
  Scenario sc = baseline();
  Scenario a = sc;
  a.cost.c2_per_joule = 0.0;
  a.cost.c3_per_hz_year = 0.0;
  a.cost.c1_per_ap_year = 1.0;
  a.network.ap_density = 10.0 / a.cost.area_m2;
  CHECK(network_cost(a) == doctest::Approx(10.0).epsilon(1e-12));

  Scenario b = sc;
  b.cost.c1_per_ap_year = 0.0;
  b.cost.c2_per_joule = 0.0;
  CHECK(network_cost(b) ==
        doctest::Approx(b.cost.c3_per_hz_year * 100e3).epsilon(1e-12));

  // Strictly increasing in W (c3 > 0) and in density (c1 > 0).
  double prev = 0.0;
  for (double w : {50e3, 100e3, 200e3}) {
    const double c = network_cost_at(sc, sc.network.ap_density, w);
    CHECK(c > prev);
    prev = c;
  }
  prev = 0.0;
  for (double lam : {2e-8, 5.5e-8, 2e-7}) {
    const double c = network_cost_at(sc, lam, 100e3);
    CHECK(c > prev);
    prev = c;
  }
}
