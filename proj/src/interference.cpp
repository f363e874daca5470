#include "lpwa/interference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lpwa/geometry.hpp"

namespace lpwa {

ActivityFactors activity_factors(const IoTTypeSpec& t, const NetworkConfig& net) {
  const double mass = t.daughters_per_parent *
                      (t.replicas * t.packet_time_s / t.reporting_period_s) *
                      (t.signal_bandwidth_hz / net.system_bandwidth_hz);
  ActivityFactors f;
  if (t.in_phi) {
    const double cw = static_cast<double>(net.code_count);
    f.same_code = mass / cw;
    f.cross_code = mass * (cw - 1.0) / cw;
  } else {
    f.same_code = 0.0;
    f.cross_code = mass;
  }
  return f;
}

namespace {

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nw[i] = {-x, w};
    nw[n - 1 - i] = {x, w};
  }
  return nw;
}

const std::vector<std::pair<double, double>>& radial_nodes() {
  static const auto nodes = gauss_legendre(64);
  return nodes;
}
const std::vector<std::pair<double, double>>& angular_nodes() {
  static const auto nodes = gauss_legendre(48);
  return nodes;
}

// One (type, code-bucket) contribution: u(d) = (1 + coef*g(d))^-m.
struct ClusterKernel {
  const PathlossModel* pl;
  double coef;  // Omega * s * Q * P / m
  int m;

  double one_minus_u(double d) const {
    const double g = pathloss_clamped(*pl, d);
    if (m == 1) {
      const double cg = coef * g;
      return cg / (1.0 + cg);
    }
    return 1.0 - std::pow(1.0 + coef * g, -m);
  }
};

double scatter_extent(const ScatteringDensity& s) {
  return s.kind == ScatteringDensity::Kind::Normal ? 8.5 * s.sigma_m : s.radius_m;
}

// Mean of [1 - u] over a cluster whose parent sits at distance rho from
// the receiver; reduces to a radial-angular integral by isotropy of f.
double cluster_mean_direct(const ClusterKernel& k, const ScatteringDensity& f,
                           double rho) {
  const double rmax = scatter_extent(f);
  double acc = 0.0;
  for (const auto& [xr, wr] : radial_nodes()) {
    const double r = 0.5 * rmax * (xr + 1.0);
    const double fw = scattering_pdf(f, r);
    if (fw <= 0.0) continue;
    double ring = 0.0;
    for (const auto& [xa, wa] : angular_nodes()) {
      const double th = 0.5 * M_PI * (xa + 1.0);
      const double d2 = r * r + rho * rho - 2.0 * r * rho * std::cos(th);
      ring += wa * k.one_minus_u(std::sqrt(std::max(d2, 0.0)));
    }
    ring *= 0.5 * M_PI;          // [0,pi] halved Jacobian
    acc += wr * r * fw * ring;
  }
  acc *= 0.5 * rmax;             // radial Jacobian
  return 2.0 * acc;              // angular symmetry
}

// Tabulated cluster mean with Catmull-Rom interpolation on log-radius.
class ClusterMeanTable {
 public:
  ClusterMeanTable(const ClusterKernel& k, const ScatteringDensity& f,
                   double rho_max, int n) {
    const double rho_min = 1.0;
    logr_.resize(n);
    v_.resize(n);
    const double l0 = std::log(rho_min), l1 = std::log(rho_max);
    for (int i = 0; i < n; ++i) {
      logr_[i] = l0 + (l1 - l0) * i / (n - 1);
      v_[i] = cluster_mean_direct(k, f, std::exp(logr_[i]));
    }
  }

  double operator()(double rho) const {
    const double lr = std::log(std::max(rho, 1.0));
    if (lr <= logr_.front()) return v_.front();
    if (lr >= logr_.back()) return v_.back();
    const double step = logr_[1] - logr_[0];
    const int i = std::min<int>((lr - logr_[0]) / step, logr_.size() - 2);
    const double t = (lr - logr_[i]) / step;
    const double p0 = v_[i], p1 = v_[i + 1];
    const double m0 = i > 0 ? 0.5 * (p1 - v_[i - 1]) : p1 - p0;
    const double m1 = i + 2 < static_cast<int>(v_.size())
                          ? 0.5 * (v_[i + 2] - p0)
                          : p1 - p0;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 +
                       (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
    return std::max(val, 0.0);
  }

 private:
  std::vector<double> logr_;
  std::vector<double> v_;
};

struct TermSpec {
  const IoTTypeSpec* type;
  double activity;  // mean interferers per cluster in this bucket
  double weight;    // Q_j
};

std::vector<TermSpec> interference_terms(const Scenario& sc) {
  std::vector<TermSpec> terms;
  for (const auto& t : sc.types) {
    const ActivityFactors f = activity_factors(t, sc.network);
    if (f.same_code > 0.0) terms.push_back({&t, f.same_code, 1.0});
    if (f.cross_code > 0.0 && sc.network.rejection_factor > 0.0)
      terms.push_back({&t, f.cross_code, sc.network.rejection_factor});
  }
  return terms;
}

ClusterKernel make_kernel(const Scenario& sc, double s, double q_weight,
                          double tx_power_w) {
  const auto& ch = sc.network.channel;
  return {&ch.pathloss,
          ch.nakagami_omega * s * q_weight * tx_power_w / ch.nakagami_m,
          ch.nakagami_m};
}

}  // namespace

double laplace_outer(double s, const Scenario& sc, const QuadratureSpec& spec,
                     const LaplaceOptions& opt) {
  if (s < 0.0) throw std::domain_error("laplace_outer: s must be >= 0");
  if (s == 0.0) return 1.0;
  double exponent = 0.0;
  for (const auto& term : interference_terms(sc)) {
    if (term.type->parent_density <= 0.0) continue;
    const ClusterKernel k = make_kernel(sc, s, term.weight, term.type->tx_power_w);
    const double rho_hi = spec.truncation_radius_m + scatter_extent(term.type->scattering);
    QuadratureSpec outer = spec;
    outer.abs_tol = std::max(spec.abs_tol, 1e-10);
    outer.rel_tol = std::max(spec.rel_tol, 1e-7);
    double integral;
    if (opt.interpolate_inner) {
      ClusterMeanTable table(k, term.type->scattering, rho_hi, opt.inner_grid_points);
      integral = integrate_1d(
          [&](double rho) {
            return 2.0 * M_PI * rho * (1.0 - std::exp(-term.activity * table(rho)));
          },
          0.0, spec.truncation_radius_m, outer);
    } else {
      integral = integrate_1d(
          [&](double rho) {
            const double v = cluster_mean_direct(k, term.type->scattering, rho);
            return 2.0 * M_PI * rho * (1.0 - std::exp(-term.activity * v));
          },
          0.0, spec.truncation_radius_m, outer);
    }
    exponent += term.type->parent_density * integral;
  }
  return std::exp(-exponent);
}

double laplace_inner(double s, const IoTTypeSpec& probe, const Scenario& sc,
                     const QuadratureSpec& spec, const LaplaceOptions& opt) {
  if (s < 0.0) throw std::domain_error("laplace_inner: s must be >= 0");
  if (s == 0.0) return 1.0;
  const ActivityFactors f = activity_factors(probe, sc.network);
  struct Bucket {
    double activity, weight;
  };
  std::vector<Bucket> buckets;
  if (f.same_code > 0.0) buckets.push_back({f.same_code, 1.0});
  if (f.cross_code > 0.0 && sc.network.rejection_factor > 0.0)
    buckets.push_back({f.cross_code, sc.network.rejection_factor});
  if (buckets.empty()) return 1.0;

  const double extent = scatter_extent(probe.scattering);
  std::vector<ClusterKernel> kernels;
  std::vector<ClusterMeanTable> tables;
  for (const auto& b : buckets) {
    kernels.push_back(make_kernel(sc, s, b.weight, probe.tx_power_w));
    if (opt.interpolate_inner)
      tables.emplace_back(kernels.back(), probe.scattering, 2.0 * extent + 1.0,
                          opt.inner_grid_points);
  }

  QuadratureSpec outer = spec;
  outer.abs_tol = std::max(spec.abs_tol, 1e-12);
  outer.rel_tol = std::max(spec.rel_tol, 1e-8);
  return integrate_1d(
      [&](double rho) {
        double expo = 0.0;
        for (std::size_t i = 0; i < buckets.size(); ++i) {
          const double v = opt.interpolate_inner
                               ? tables[i](rho)
                               : cluster_mean_direct(kernels[i], probe.scattering, rho);
          expo += buckets[i].activity * v;
        }
        return 2.0 * M_PI * rho * scattering_pdf(probe.scattering, rho) *
               std::exp(-expo);
      },
      0.0, extent, outer);
}

double laplace_total(double s, const IoTTypeSpec& probe, const Scenario& sc,
                     const QuadratureSpec& spec, const LaplaceOptions& opt) {
  return laplace_outer(s, sc, spec, opt) * laplace_inner(s, probe, sc, spec, opt);
}

}  // namespace lpwa
