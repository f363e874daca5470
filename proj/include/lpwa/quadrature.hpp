#pragma once

#include <functional>
#include <limits>
#include <stdexcept>

namespace lpwa {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double truncation_radius_m = 28284.271247461902;  // 20x20 km diagonal
  int max_subdivisions = 1 << 20;
  // Length scale used by the change of variables on semi-infinite ranges.
  double infinity_scale = 1.0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod 7-15 on (a,b); b may be +inf (mapped through
// x = a + s*t/(1-t)).  Throws NonConvergence when the subdivision budget
// is exhausted before reaching max(abs_tol, rel_tol*|result|).
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec = {});

// Integral over R^2 of f(r, theta) in polar form, truncated at the spec
// radius.  The isotropic overload skips the angular sweep.
double integrate_radial_2d(const std::function<double(double, double)>& f,
                           const QuadratureSpec& spec = {});
double integrate_radial_2d(const std::function<double(double)>& f_radial,
                           const QuadratureSpec& spec = {});

}  // namespace lpwa
