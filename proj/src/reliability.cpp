#include "lpwa/reliability.hpp"

#include <algorithm>
#include <cmath>

#include "lpwa/geometry.hpp"
#include "lpwa/special.hpp"

namespace lpwa {

namespace {

constexpr double kDelta4Eps = 1e-12;

bool is_delta4_power_law(const PathlossModel& pl) {
  return pl.is_power_law() && std::abs(pl.delta - 4.0) < kDelta4Eps;
}

// e^{x^2} erfc(x) for x >= 0 without overflow.
double erfcx_pos(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  const double ix2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * ix2;
    sum += term;
  }
  return sum / (x * std::sqrt(M_PI));
}

// e^{a^2} * G(a, ell) = int_0^inf t^(ell-1) exp(-t^2 - 2at) dt, stable at
// any interference-to-noise ratio.
double gaussian_tail_moment_scaled(double a, int ell) {
  const double half_sqrt_pi = 0.5 * std::sqrt(M_PI);
  const double ex = half_sqrt_pi * erfcx_pos(a);
  switch (ell) {
    case 1:
      return ex;
    case 2:
      return 0.5 - a * ex;
    case 3:
      return (0.5 + a * a) * ex - 0.5 * a;
    case 4:
      return 0.5 * (a * a + 1.0) - (1.5 * a + a * a * a) * ex;
    default: {
      QuadratureSpec spec;
      spec.rel_tol = 1e-12;
      spec.infinity_scale = 1.0;
      return integrate_1d(
          [a, ell](double t) {
            return std::pow(t, ell - 1) * std::exp(-t * t - 2.0 * a * t);
          },
          0.0, kInf, spec);
    }
  }
}

}  // namespace

double h_field(double z_m, double xi, double delta) {
  if (delta <= 2.0)
    throw std::domain_error("h_field: integral diverges for delta <= 2");
  if (xi <= 0.0) return 0.0;
  const double csc = 1.0 / std::sin(2.0 * M_PI / delta);
  return z_m * z_m * std::pow(xi, 2.0 / delta) * 2.0 * M_PI * M_PI * csc / delta;
}

double h_field_quadrature(double z_m, double xi, const PathlossModel& pl,
                          const QuadratureSpec& spec, double upper_m) {
  if (xi <= 0.0) return 0.0;
  const double gz_over_xi = pathloss_clamped(pl, z_m) / xi;
  QuadratureSpec q = spec;
  q.infinity_scale = std::max(z_m, 1.0) * std::max(std::pow(xi, 1.0 / pl.delta), 1.0);
  return integrate_1d(
      [&](double r) {
        if (!std::isfinite(r)) return 0.0;
        const double g = pathloss_clamped(pl, r, 1e-9);
        if (g <= 0.0) return 0.0;
        return 2.0 * M_PI * r * g / (g + gz_over_xi);
      },
      0.0, upper_m, q);
}

double h_cluster(double z_m, double xi, double sigma_m) {
  if (xi <= 0.0) return 0.0;
  const double a = std::sqrt(xi) * z_m * z_m / (4.0 * sigma_m * sigma_m);
  if (a <= 0.0) return 0.0;
  return a * trig_integral_aux_f(a);
}

double h_cluster_remark(double z_m, double xi, double sigma_m, double threshold) {
  if (xi <= 0.0) return 0.0;
  const double a = std::sqrt(xi) * z_m * z_m / (4.0 * sigma_m * sigma_m);
  return a >= threshold ? 1.0 : h_cluster(z_m, xi, sigma_m);
}

double self_convolution_pdf(const ScatteringDensity& base, double radius_m) {
  if (base.kind == ScatteringDensity::Kind::Normal) {
    const auto conv = normal_self_convolution(base.sigma_m);
    return scattering_pdf(conv, radius_m);
  }
  // Uniform disc: lens-area overlap of two discs of radius R at offset v.
  const double rc = base.radius_m;
  const double v = radius_m;
  if (v >= 2.0 * rc) return 0.0;
  const double lens = 2.0 * rc * rc * std::acos(v / (2.0 * rc)) -
                      0.5 * v * std::sqrt(4.0 * rc * rc - v * v);
  const double disc = M_PI * rc * rc;
  return lens / (disc * disc);
}

double h_cluster_quadrature(double z_m, double xi, const PathlossModel& pl,
                            const ScatteringDensity& base,
                            const QuadratureSpec& spec) {
  if (xi <= 0.0) return 0.0;
  const double gz_over_xi = pathloss_clamped(pl, z_m) / xi;
  const double extent = base.kind == ScatteringDensity::Kind::Normal
                            ? 8.5 * base.sigma_m * std::sqrt(2.0)
                            : 2.0 * base.radius_m;
  QuadratureSpec q = spec;
  return integrate_1d(
      [&](double r) {
        const double g = pathloss_clamped(pl, r, 1e-9);
        return 2.0 * M_PI * r * self_convolution_pdf(base, r) * g / (g + gz_over_xi);
      },
      0.0, extent, q);
}

double p_success_at(const IoTTypeSpec& i, double z_m, const Scenario& sc,
                    SuccessMethod method, const QuadratureSpec& spec) {
  const auto& ch = sc.network.channel;
  if (ch.nakagami_m != 1)
    throw UnsupportedFading("analytic success probability requires m = 1");
  const double gz = pathloss_clamped(ch.pathloss, z_m);
  const double s_arg = ch.sinr_threshold / (ch.nakagami_omega * i.tx_power_w * gz);
  const double p_noise = std::exp(-sc.noise_power_w(i) * s_arg);

  if (method == SuccessMethod::ExactNumericM1)
    return p_noise * laplace_total(s_arg, i, sc, spec);

  double exponent = 0.0;
  for (const auto& k : sc.types) {
    const ActivityFactors act = activity_factors(k, sc.network);
    const double buckets[2] = {act.same_code, act.cross_code};
    for (int j = 0; j < 2; ++j) {
      const double q = code_weight(sc.network, j);
      const double xi = ch.sinr_threshold * q * k.tx_power_w /
                        (ch.nakagami_omega * i.tx_power_w);
      if (buckets[j] <= 0.0 || xi <= 0.0 || k.parent_density <= 0.0) continue;
      const double h = (ch.pathloss.is_power_law() && ch.pathloss.delta > 2.0)
                           ? h_field(z_m, xi, ch.pathloss.delta)
                           : h_field_quadrature(z_m, xi, ch.pathloss, spec,
                                                spec.truncation_radius_m);
      exponent += k.parent_density * buckets[j] * h;
    }
  }

  const ActivityFactors own = activity_factors(i, sc.network);
  const double own_buckets[2] = {own.same_code, own.cross_code};
  for (int j = 0; j < 2; ++j) {
    const double q = code_weight(sc.network, j);
    const double xi = ch.sinr_threshold * q / ch.nakagami_omega;
    if (own_buckets[j] <= 0.0 || xi <= 0.0) continue;
    double hc;
    if (method == SuccessMethod::RemarkApprox) {
      hc = 1.0;
    } else if (is_delta4_power_law(ch.pathloss) &&
               i.scattering.kind == ScatteringDensity::Kind::Normal) {
      hc = h_cluster(z_m, xi, i.scattering.sigma_m);
    } else {
      hc = h_cluster_quadrature(z_m, xi, ch.pathloss, i.scattering, spec);
    }
    exponent += own_buckets[j] * hc;
  }

  const double p = p_noise * std::exp(-exponent);
  return std::clamp(p, 0.0, 1.0);
}

double nearest_ap_cdf(int ell, double ap_density, double r_m) {
  if (ell < 1) throw std::domain_error("nearest_ap_cdf: ell must be >= 1");
  if (r_m <= 0.0) return 0.0;
  const double x = ap_density * M_PI * r_m * r_m;
  double term = std::exp(-x);
  double tail = term;
  for (int n = 1; n < ell; ++n) {
    term *= x / n;
    tail += term;
  }
  return 1.0 - tail;
}

double nearest_ap_pdf(int ell, double ap_density, double r_m) {
  if (ell < 1) throw std::domain_error("nearest_ap_pdf: ell must be >= 1");
  if (r_m <= 0.0) return 0.0;
  const double x = ap_density * M_PI * r_m * r_m;
  double log_p = -x + ell * std::log(x) + std::log(2.0 / r_m) - std::lgamma(ell);
  return std::exp(log_p);
}

namespace {

struct SpatialClosedParts {
  double quartic_coef;    // noise term, multiplies r^4 in the exponent
  double quadratic_coef;  // interference + AP-void term, multiplies r^2
  double tail_shift;      // lower limit of the Gaussian tail moment
  double intra;           // cluster-mate factor at its far-field limit
};

SpatialClosedParts spatial_closed_parts(const IoTTypeSpec& i, const Scenario& sc) {
  const auto& ch = sc.network.channel;
  if (ch.nakagami_m != 1)
    throw UnsupportedFading("closed spatial form requires m = 1");
  if (!is_delta4_power_law(ch.pathloss))
    throw std::domain_error(
        "closed spatial form requires power-law pathloss with delta = 4");
  if (i.scattering.kind != ScatteringDensity::Kind::Normal)
    throw std::domain_error("closed spatial form requires normal scattering");

  const double alpha = ch.pathloss.power_law_alpha();
  const double quartic = sc.noise_power_w(i) * ch.sinr_threshold /
                         (ch.nakagami_omega * i.tx_power_w * alpha);
  const double csc_half_pi = 1.0 / std::sin(M_PI / 2.0);
  double quadratic = sc.network.ap_density * M_PI;
  for (const auto& k : sc.types) {
    const ActivityFactors act = activity_factors(k, sc.network);
    const double buckets[2] = {act.same_code, act.cross_code};
    for (int j = 0; j < 2; ++j) {
      const double q = code_weight(sc.network, j);
      if (buckets[j] <= 0.0 || q <= 0.0) continue;
      const double xi = ch.sinr_threshold * q * k.tx_power_w /
                        (ch.nakagami_omega * i.tx_power_w);
      quadratic += k.parent_density * buckets[j] * std::sqrt(xi) *
                   (M_PI * M_PI / 2.0) * csc_half_pi;
    }
  }
  // Cluster term at its far-field limit: active siblings in any bucket
  // with nonzero code weight count in full.
  const ActivityFactors own = activity_factors(i, sc.network);
  double own_mass = 0.0;
  if (code_weight(sc.network, 0) > 0.0) own_mass += own.same_code;
  if (code_weight(sc.network, 1) > 0.0) own_mass += own.cross_code;
  const double shift = quartic > 0.0 ? quadratic / (2.0 * std::sqrt(quartic)) : kInf;
  return {quartic, quadratic, shift, std::exp(-own_mass)};
}

}  // namespace

double p_success_spatial_closed(const IoTTypeSpec& i, const Scenario& sc) {
  const SpatialClosedParts p = spatial_closed_parts(i, sc);
  const double lap = sc.network.ap_density * M_PI;
  double fail_prod = 1.0;
  double fact = 1.0;  // (ell-1)!
  for (int ell = 1; ell <= sc.network.ell_max; ++ell) {
    if (ell > 1) fact *= ell - 1;
    double term;
    if (p.quartic_coef <= 0.0) {
      // Noise-free limit: the quartic factor drops and the integral is
      // elementary.
      term = p.intra * std::pow(lap / p.quadratic_coef, ell);
    } else {
      term = p.intra * std::pow(lap, ell) / fact *
             std::pow(p.quartic_coef, -0.5 * ell) *
             gaussian_tail_moment_scaled(p.tail_shift, ell);
    }
    fail_prod *= 1.0 - std::clamp(term, 0.0, 1.0);
  }
  return 1.0 - fail_prod;
}

double p_success_spatial_closed_legacy(const IoTTypeSpec& i, const Scenario& sc) {
  const SpatialClosedParts p = spatial_closed_parts(i, sc);
  const ActivityFactors own = activity_factors(i, sc.network);
  const double intra_legacy = std::exp(-own.cross_code);
  const double lap = sc.network.ap_density * M_PI;
  double fail_prod = 1.0;
  double fact = 1.0;
  for (int ell = 1; ell <= sc.network.ell_max; ++ell) {
    if (ell > 1) fact *= ell - 1;
    // Legacy constant placement: squared prefactor denominator, one power
    // less in the Jacobian, squared-over-noise lower integration limit.
    const double q1 = p.quartic_coef, q2 = p.quadratic_coef;
    const double lower = q1 > 0.0 ? q2 * q2 / (2.0 * q1) : kInf;
    QuadratureSpec qs;
    qs.rel_tol = 1e-10;
    qs.infinity_scale = 1.0 + lower;
    double g = 0.0;
    if (std::isfinite(lower)) {
      g = integrate_1d(
          [&](double t) {
            const double z = lower + t;
            return std::pow(z - p.tail_shift, ell - 1) * std::exp(-z * z);
          },
          0.0, kInf, qs);
    }
    const double pref =
        q1 > 0.0 ? std::exp(std::min(q2 * q2 / (4.0 * q1 * q1), 700.0)) : 1.0;
    const double term = intra_legacy * std::pow(lap, ell) / fact *
                        std::pow(q1, -0.5 * (ell - 1)) * pref * g;
    fail_prod *= 1.0 - std::clamp(term, 0.0, 1.0);
  }
  return 1.0 - fail_prod;
}

double p_success_spatial_numeric(const IoTTypeSpec& i, const Scenario& sc,
                                 SuccessMethod inner, const QuadratureSpec& spec) {
  const double lam = sc.network.ap_density;
  double fail_prod = 1.0;
  for (int ell = 1; ell <= sc.network.ell_max; ++ell) {
    QuadratureSpec q = spec;
    q.infinity_scale = cell_edge_distance(lam) * std::sqrt(static_cast<double>(ell));
    q.abs_tol = std::max(spec.abs_tol, 1e-12);
    const double fail = integrate_1d(
        [&](double r) {
          const double ps = p_success_at(i, r, sc, inner, spec);
          return (1.0 - ps) * nearest_ap_pdf(ell, lam, r);
        },
        0.0, kInf, q);
    fail_prod *= std::clamp(fail, 0.0, 1.0);
  }
  return 1.0 - fail_prod;
}

double p_success_spatial(const IoTTypeSpec& i, const Scenario& sc,
                         SuccessMethod method, const QuadratureSpec& spec) {
  // The closed route exists only on its own assumptions; anything else
  // integrates the distance distribution directly.
  if (method == SuccessMethod::ClosedApprox &&
      is_delta4_power_law(sc.network.channel.pathloss) &&
      i.scattering.kind == ScatteringDensity::Kind::Normal &&
      sc.network.channel.nakagami_m == 1)
    return p_success_spatial_closed(i, sc);
  return p_success_spatial_numeric(i, sc, method, spec);
}

double outage_probability(double p_s, int replicas, int retx_bound) {
  if (p_s < 0.0 || p_s > 1.0)
    throw std::domain_error("outage_probability: p_s must be in [0,1]");
  return std::pow(1.0 - p_s, static_cast<double>(replicas) * retx_bound);
}

double outage(const IoTTypeSpec& i, double p_s_spatial) {
  return outage_probability(p_s_spatial, i.replicas, i.retx_bound);
}

}  // namespace lpwa
