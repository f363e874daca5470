#include "lpwa/special.hpp"

#include <cmath>
#include <stdexcept>

#include "lpwa/quadrature.hpp"

namespace lpwa {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kSeriesCutoff = 12.0;

// Power series for Si and Cin, good to ~1e-14 below the cutoff.
void trig_integrals_series(double x, double& si_out, double& ci_out) {
  const double x2 = x * x;
  double term = x;
  double si = 0.0;
  for (int k = 0;; ++k) {
    const int n = 2 * k + 1;
    si += term / n;
    term *= -x2 / ((n + 1.0) * (n + 2.0));
    if (std::abs(term) < 1e-18) break;
  }
  double cin = 0.0;
  term = x2 / 2.0;
  for (int k = 1;; ++k) {
    const int n = 2 * k;
    cin += term / n;
    term *= -x2 / ((n + 1.0) * (n + 2.0));
    if (std::abs(term) < 1e-18) break;
  }
  si_out = si - M_PI / 2.0;
  ci_out = kEulerGamma + std::log(x) - cin;
}

// Auxiliary functions f(x) = int_0^inf e^{-xt}/(1+t^2) dt and
// g(x) = int_0^inf t e^{-xt}/(1+t^2) dt, evaluated by adaptive
// quadrature on the exponentially decaying kernel.  They recombine into
// the trigonometric integrals without cancellation at large argument.
void trig_aux_fg(double x, double& f_out, double& g_out) {
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 1e-16;
  spec.infinity_scale = 1.0 / x;
  f_out = integrate_1d(
      [x](double t) { return std::exp(-x * t) / (1.0 + t * t); }, 0.0, kInf,
      spec);
  g_out = integrate_1d(
      [x](double t) { return t * std::exp(-x * t) / (1.0 + t * t); }, 0.0,
      kInf, spec);
}

}  // namespace

double sine_integral(double x) {
  if (x < 0.0) throw std::domain_error("sine_integral: x must be >= 0");
  if (x == 0.0) return -M_PI / 2.0;
  if (x < kSeriesCutoff) {
    double si, ci;
    trig_integrals_series(x, si, ci);
    return si;
  }
  double f, g;
  trig_aux_fg(x, f, g);
  return -f * std::cos(x) - g * std::sin(x);
}

double cosine_integral(double x) {
  if (x <= 0.0) throw std::domain_error("cosine_integral: x must be > 0");
  if (x < kSeriesCutoff) {
    double si, ci;
    trig_integrals_series(x, si, ci);
    return ci;
  }
  double f, g;
  trig_aux_fg(x, f, g);
  return f * std::sin(x) - g * std::cos(x);
}

double trig_integral_aux_f(double x) {
  if (x <= 0.0) throw std::domain_error("trig_integral_aux_f: x must be > 0");
  if (x < kSeriesCutoff) {
    double si, ci;
    trig_integrals_series(x, si, ci);
    return ci * std::sin(x) - si * std::cos(x);
  }
  double f, g;
  trig_aux_fg(x, f, g);
  return f;
}

double erf(double x) { return std::erf(x); }

double gaussian_tail_moment(double shift, int ell) {
  if (ell < 1) throw std::domain_error("gaussian_tail_moment: ell must be >= 1");
  const double a = shift;
  const double sqrt_pi = std::sqrt(M_PI);
  const double e = std::exp(-a * a);
  const double tail = 0.5 * sqrt_pi * std::erfc(a);  // int_a^inf exp(-z^2) dz
  switch (ell) {
    case 1:
      return tail;
    case 2:
      return 0.5 * e - a * tail;
    case 3:
      return (0.5 + a * a) * tail - 0.5 * a * e;
    case 4:
      return 0.5 * (a * a + 1.0) * e - (1.5 * a + a * a * a) * tail;
    default: {
      QuadratureSpec spec;
      spec.rel_tol = 1e-12;
      spec.infinity_scale = 1.0 + std::abs(a);
      return integrate_1d(
          [a, ell](double t) {
            return std::pow(t, ell - 1) * std::exp(-(t + a) * (t + a));
          },
          0.0, kInf, spec);
    }
  }
}

ScatteringDensity normal_self_convolution(double sigma_m) {
  if (!(sigma_m > 0.0))
    throw std::domain_error("normal_self_convolution: sigma must be > 0");
  return ScatteringDensity::normal(sigma_m * std::sqrt(2.0));
}

}  // namespace lpwa
