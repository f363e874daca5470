#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpwa/geometry.hpp"
#include "lpwa/quadrature.hpp"
#include "lpwa/special.hpp"

using namespace lpwa;

namespace {

// Fixed-resolution composite Simpson oracle, independent of the adaptive
// integrator under test.
double simpson_oracle(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Series oracle for erf, |err| ~ 1e-15 for |x| <= 3.
double erf_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
    if (std::abs(term) < 1e-18) break;
  }
  return sum * 2.0 / std::sqrt(M_PI);
}

}  // namespace

TEST_CASE("integrate_1d basics") {
  QuadratureSpec spec;
  spec.infinity_scale = 1.0;
  CHECK(integrate_1d([](double x) { return std::exp(-x); }, 0.0, kInf, spec) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_1d([](double x) { return x * x; }, 0.0, 1.0, spec) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("integrate_1d matches a fixed high-resolution oracle on the field kernel") {
  auto f = [](double r) { return 2.0 * M_PI * r / (1.0 + r * r * r * r); };
  QuadratureSpec spec;
  spec.infinity_scale = 1.0;
  const double adaptive = integrate_1d(f, 0.0, kInf, spec);
  // Oracle: dense fixed quadrature to r = 400 plus the exact r^-3 tail.
  const double oracle = simpson_oracle(f, 0.0, 400.0, 1 << 22) +
                        2.0 * M_PI / (2.0 * 400.0 * 400.0);
  CHECK(adaptive == doctest::Approx(oracle).epsilon(1e-8));
  CHECK(adaptive == doctest::Approx(4.934802).epsilon(1e-6));
}

TEST_CASE("integrate_radial_2d normalizes scattering densities") {
  QuadratureSpec spec;
  spec.truncation_radius_m = 5000.0;
  const auto normal = ScatteringDensity::normal(100.0);
  CHECK(integrate_radial_2d([&](double r) { return scattering_pdf(normal, r); },
                            spec) == doctest::Approx(1.0).epsilon(1e-8));
  const auto uni = ScatteringDensity::uniform(250.0);
  CHECK(integrate_radial_2d([&](double r) { return scattering_pdf(uni, r); },
                            spec) == doctest::Approx(1.0).epsilon(1e-8));
  QuadratureSpec small = spec;
  small.truncation_radius_m = 10.0;
  CHECK(integrate_radial_2d([&](double r) { return r <= 2.0 ? 1.0 : 0.0; },
                            small) == doctest::Approx(4.0 * M_PI).epsilon(1e-6));
  // Full polar form agrees with the isotropic fast path.
  CHECK(integrate_radial_2d(
            [&](double r, double) { return scattering_pdf(normal, r); }, spec) ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("quadrature stable under truncation-radius doubling") {
  const auto normal = ScatteringDensity::normal(100.0);
  QuadratureSpec spec;
  spec.truncation_radius_m = 3000.0;
  const double a =
      integrate_radial_2d([&](double r) { return scattering_pdf(normal, r); }, spec);
  spec.truncation_radius_m *= 2.0;
  const double b =
      integrate_radial_2d([&](double r) { return scattering_pdf(normal, r); }, spec);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("integrate_1d throws NonConvergence when the budget is exhausted") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  spec.max_subdivisions = 4;
  CHECK_THROWS_AS(
      integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-14)); }, 0.0,
                   1.0, spec),
      NonConvergence);
}

TEST_CASE("sine integral") {
  CHECK(sine_integral(1e-12) == doctest::Approx(-M_PI / 2.0).epsilon(1e-10));
  CHECK(std::abs(sine_integral(1e6)) < 1e-6);
  // Reference values on both sides of the series/quadrature switch.
  CHECK(sine_integral(11.999999) ==
        doctest::Approx(-0.065825040554077).epsilon(1e-10));
  CHECK(sine_integral(12.000001) ==
        doctest::Approx(-0.065825129982896).epsilon(1e-10));
  CHECK_THROWS_AS(sine_integral(-1.0), std::domain_error);
}

TEST_CASE("cosine integral against a quadrature oracle") {
  // Truncated quadrature with an asymptotic remainder for the
  // oscillatory tail beyond the cutoff.
  const double x = 1.0;
  const double big = 4000.25 * 2.0 * M_PI;
  const double head =
      simpson_oracle([](double t) { return std::cos(t) / t; }, x, big, 1 << 21);
  const double tail = std::sin(big) / big - std::cos(big) / (big * big) -
                      2.0 * std::sin(big) / (big * big * big);
  const double oracle = -(head - tail);
  CHECK(cosine_integral(1.0) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(cosine_integral(1.0) == doctest::Approx(0.337403922900968).epsilon(1e-12));
  CHECK(cosine_integral(11.999999) ==
        doctest::Approx(-0.049780077205257).epsilon(1e-10));
  CHECK(cosine_integral(12.000001) ==
        doctest::Approx(-0.049779936562931).epsilon(1e-10));
  CHECK_THROWS_AS(cosine_integral(0.0), std::domain_error);
}

TEST_CASE("si and ci decay bounds") {
  for (double x : {150.0, 400.0, 1000.0, 25000.0}) {
    CHECK(std::abs(sine_integral(x)) < 2.0 / x);
    CHECK(std::abs(cosine_integral(x)) < 2.0 / x);
  }
}

TEST_CASE("erf") {
  CHECK(lpwa::erf(0.0) == 0.0);
  CHECK(lpwa::erf(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lpwa::erf(1.0) == doctest::Approx(erf_series(1.0)).epsilon(1e-12));
  CHECK(lpwa::erf(1.0) == doctest::Approx(0.8427007929).epsilon(1e-9));
  for (double x : {0.1, 0.7, 1.9, 2.8})
    CHECK(lpwa::erf(-x) == doctest::Approx(-lpwa::erf(x)).epsilon(1e-15));
}

TEST_CASE("gaussian tail moment") {
  CHECK(gaussian_tail_moment(0.0, 1) ==
        doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));
  for (double a : {-0.5, 0.0, 0.8, 2.5}) {
    const double expect = -(std::sqrt(M_PI) * (lpwa::erf(a) - 1.0)) / 2.0;
    CHECK(gaussian_tail_moment(a, 1) == doctest::Approx(expect).epsilon(1e-12));
  }
  // Closed forms match the defining integral; ell = 6 exercises the
  // quadrature fallback.
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.infinity_scale = 1.0;
  for (int ell : {1, 2, 3, 4, 6}) {
    for (double a : {0.0, 0.5, 1.7}) {
      const double oracle = integrate_1d(
          [&](double t) {
            return std::pow(t, ell - 1) * std::exp(-(t + a) * (t + a));
          },
          0.0, kInf, spec);
      CHECK(gaussian_tail_moment(a, ell) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
  double prev = kInf;
  for (double a : {-1.0, 0.0, 1.0, 2.0, 4.0}) {
    const double g = gaussian_tail_moment(a, 1);
    CHECK(g > 0.0);
    CHECK(g < prev);
    prev = g;
  }
  CHECK_THROWS_AS(gaussian_tail_moment(0.0, 0), std::domain_error);
}

TEST_CASE("normal self convolution") {
  const auto conv = normal_self_convolution(100.0);
  REQUIRE(conv.kind == ScatteringDensity::Kind::Normal);
  CHECK(conv.sigma_m == doctest::Approx(100.0 * std::sqrt(2.0)));
  CHECK(scattering_pdf(conv, 0.0) ==
        doctest::Approx(1.0 / (4.0 * M_PI * 1e4)).epsilon(1e-12));
  for (double r : {50.0, 150.0, 400.0})
    CHECK(scattering_pdf(conv, r) / scattering_pdf(conv, 0.0) ==
          doctest::Approx(std::exp(-r * r / 4e4)).epsilon(1e-12));
  QuadratureSpec spec;
  spec.truncation_radius_m = 5000.0;
  CHECK(integrate_radial_2d([&](double r) { return scattering_pdf(conv, r); },
                            spec) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(normal_self_convolution(0.0), std::domain_error);
}
