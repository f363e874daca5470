#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpwa/geometry.hpp"
#include "lpwa/quadrature.hpp"
#include "lpwa/rng.hpp"
#include "lpwa/units.hpp"

using namespace lpwa;

TEST_CASE("pathloss power law") {
  const auto pl = PathlossModel::power_law(1.0, 4.0);
  CHECK(pathloss(pl, 2.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK_THROWS_AS(pathloss(pl, 0.0), std::domain_error);
  CHECK(pathloss_clamped(pl, 0.0) == doctest::Approx(1.0));
  // Strictly decreasing.
  double prev = pathloss(pl, 0.5);
  for (double d : {1.0, 3.0, 10.0, 100.0, 5000.0}) {
    const double g = pathloss(pl, d);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("dB-law pathloss") {
  const auto pl = PathlossModel::from_db_law(133.0, 38.3, 1000.0);
  CHECK(pathloss(pl, 1000.0) == doctest::Approx(std::pow(10.0, -13.3)).epsilon(1e-12));
  // Round trip at 2 km: expected loss is 133 + 38.3*log10(2) dB.
  const double g = pathloss(pl, 2000.0);
  const double loss_db = -linear_to_db(g);
  CHECK(loss_db == doctest::Approx(133.0 + 38.3 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("bounded pathloss with alpha1") {
  PathlossModel pl;
  pl.alpha1 = 1.0;
  pl.alpha2 = 1.0;
  pl.delta = 4.0;
  CHECK(pathloss(pl, 0.0) == doctest::Approx(1.0));
  CHECK_FALSE(pl.is_power_law());
}

TEST_CASE("fading pdf") {
  ChannelModel ch;
  ch.nakagami_m = 1;
  ch.nakagami_omega = 1.0;
  CHECK(fading_pdf(ch, 0.0) == doctest::Approx(1.0));
  QuadratureSpec spec;
  spec.infinity_scale = 1.0;
  CHECK(integrate_1d([&](double q) { return fading_pdf(ch, q); }, 0.0, kInf,
                     spec) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate_1d([&](double q) { return q * fading_pdf(ch, q); }, 0.0, kInf,
                     spec) == doctest::Approx(1.0).epsilon(1e-6));
  ch.nakagami_m = 2;
  CHECK(fading_pdf(ch, 0.0) == 0.0);
  ch.nakagami_omega = 2.5;
  CHECK(integrate_1d([&](double q) { return q * fading_pdf(ch, q); }, 0.0, kInf,
                     spec) == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("fading samples") {
  ChannelModel ch;
  ch.nakagami_m = 1;
  ch.nakagami_omega = 1.5;
  Rng rng(7);
  const int n = 1000000;
  double sum = 0.0;
  bool nonneg = true;
  for (int i = 0; i < n; ++i) {
    const double h = rng.fading(ch);
    nonneg = nonneg && h >= 0.0;
    sum += h;
  }
  CHECK(nonneg);
  // Law of large numbers: 3 standard errors of the exponential mean.
  const double se = ch.nakagami_omega / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum / n - ch.nakagami_omega) < 3.0 * se);

  // Variance shrinks like omega^2/m.
  ch.nakagami_m = 64;
  ch.nakagami_omega = 1.0;
  double s1 = 0.0, s2 = 0.0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    const double h = rng.fading(ch);
    s1 += h;
    s2 += h * h;
  }
  const double var = s2 / m - (s1 / m) * (s1 / m);
  CHECK(var < 1.0 / 32.0);
}

TEST_CASE("fading sampling is reproducible bit for bit") {
  ChannelModel ch;
  ch.nakagami_m = 3;
  ch.nakagami_omega = 2.0;
  Rng a(42, 5), b(42, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a.fading(ch) == b.fading(ch));
  Rng c(42, 6);
  CHECK(Rng(42, 5).fading(ch) != c.fading(ch));
}

TEST_CASE("scattering densities") {
  const auto normal = ScatteringDensity::normal(100.0);
  CHECK(scattering_pdf(normal, 0.0) ==
        doctest::Approx(1.0 / (2.0 * M_PI * 1e4)).epsilon(1e-12));
  CHECK(scattering_pdf(normal, Point2D{60.0, 80.0}) ==
        doctest::Approx(scattering_pdf(normal, 100.0)).epsilon(1e-12));

  const auto uni = ScatteringDensity::uniform(200.0);
  CHECK(scattering_pdf(uni, 200.1) == 0.0);
  CHECK(scattering_pdf(uni, 150.0) ==
        doctest::Approx(1.0 / (M_PI * 4e4)).epsilon(1e-12));

  QuadratureSpec spec;
  spec.truncation_radius_m = 2000.0;
  for (const auto& s : {normal, uni})
    CHECK(integrate_radial_2d([&](double r) { return scattering_pdf(s, r); },
                              spec) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cell edge distance") {
  CHECK(cell_edge_distance(1.0 / M_PI) == doctest::Approx(1.0).epsilon(1e-12));
  // Direct arithmetic: sqrt(1/(pi*5.5e-8)) = 2405.71 m.
  CHECK(cell_edge_distance(5.5e-8) == doctest::Approx(2405.7124674551).epsilon(1e-6));
  const double d1 = cell_edge_distance(1e-7);
  const double d2 = cell_edge_distance(2e-7);
  CHECK(d1 / d2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(cell_edge_distance(0.0), std::domain_error);
}
