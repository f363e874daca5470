#include "lpwa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lpwa {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  // Deviation norm keeps the sharpened error estimate honest on panels
  // with kinks or discontinuities (QUADPACK's resasc scaling).
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  resasc *= std::abs(h);
  resk *= h;
  resg *= h;
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {resk, err};
}

struct Interval {
  double a, b, value, error;
};

double adapt(const std::function<double(double)>& f, double a, double b,
             const QuadratureSpec& spec) {
  PanelResult first = gk15(f, a, b);
  std::vector<Interval> heap{{a, b, first.value, first.error}};
  auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
  double total = first.value;
  double total_err = first.error;
  int splits = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions)
      throw NonConvergence("integrate_1d: subdivision budget exhausted");
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Interval worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw NonConvergence("integrate_1d: interval collapsed below machine precision");
    PanelResult left = gk15(f, worst.a, mid);
    PanelResult right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back({worst.a, mid, left.value, left.error});
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back({mid, worst.b, right.value, right.error});
    std::push_heap(heap.begin(), heap.end(), cmp);
    ++splits;
  }
  return total;
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
  if (!(b > a)) return 0.0;
  if (std::isinf(b)) {
    const double s = spec.infinity_scale > 0.0 ? spec.infinity_scale : 1.0;
    auto mapped = [&](double t) {
      const double onemt = 1.0 - t;
      if (onemt <= 0.0) return 0.0;
      const double x = a + s * t / onemt;
      if (!std::isfinite(x)) return 0.0;
      const double fx = f(x);
      if (fx == 0.0) return 0.0;
      return fx * s / (onemt * onemt);
    };
    return adapt(mapped, 0.0, 1.0, spec);
  }
  return adapt(f, a, b, spec);
}

double integrate_radial_2d(const std::function<double(double, double)>& f,
                           const QuadratureSpec& spec) {
  QuadratureSpec angular = spec;
  angular.abs_tol = std::max(spec.abs_tol, 1e-14);
  auto radial = [&](double r) {
    double ring = integrate_1d([&](double th) { return f(r, th); }, 0.0,
                               2.0 * M_PI, angular);
    return r * ring;
  };
  return integrate_1d(radial, 0.0, spec.truncation_radius_m, spec);
}

double integrate_radial_2d(const std::function<double(double)>& f_radial,
                           const QuadratureSpec& spec) {
  auto radial = [&](double r) { return 2.0 * M_PI * r * f_radial(r); };
  return integrate_1d(radial, 0.0, spec.truncation_radius_m, spec);
}

}  // namespace lpwa
