#pragma once

#include "lpwa/scenario.hpp"

namespace lpwa {

// Trigonometric integrals in the convention si(x) = -int_x^inf sin(t)/t dt
// (so si(0+) = -pi/2) and ci(x) = -int_x^inf cos(t)/t dt for x > 0.
double sine_integral(double x);
double cosine_integral(double x);

// Auxiliary combination ci(x)sin(x) - si(x)cos(x); positive, ~1/x for
// large x.  Kept separate because the success-probability closed form
// needs it without cancellation at large argument.
double trig_integral_aux_f(double x);

double erf(double x);

// int_{shift}^inf (z - shift)^(ell-1) exp(-z^2) dz, closed form in
// erf/exp for ell <= 4, quadrature beyond.
double gaussian_tail_moment(double shift, int ell);

// Self-convolution of the normal scattering kernel: Normal(sigma*sqrt(2)).
ScatteringDensity normal_self_convolution(double sigma_m);

}  // namespace lpwa
