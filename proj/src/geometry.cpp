#include "lpwa/geometry.hpp"

#include <stdexcept>

namespace lpwa {

double pathloss(const PathlossModel& m, double distance_m) {
  if (distance_m < 0.0) throw std::domain_error("pathloss: negative distance");
  if (distance_m == 0.0 && m.alpha1 == 0.0)
    throw std::domain_error("pathloss: singular at d=0 for power-law model");
  return 1.0 / (m.alpha1 + m.alpha2 * std::pow(distance_m, m.delta));
}

double fading_pdf(const ChannelModel& ch, double q) {
  if (q < 0.0) return 0.0;
  const double m = static_cast<double>(ch.nakagami_m);
  const double omega = ch.nakagami_omega;
  if (q == 0.0) return ch.nakagami_m == 1 ? m / omega : 0.0;
  const double log_pdf = m * std::log(m / omega) + (m - 1.0) * std::log(q) -
                         m * q / omega - std::lgamma(m);
  return std::exp(log_pdf);
}

double scattering_pdf(const ScatteringDensity& s, double radius_m) {
  if (s.kind == ScatteringDensity::Kind::Normal) {
    const double s2 = s.sigma_m * s.sigma_m;
    return std::exp(-radius_m * radius_m / (2.0 * s2)) / (2.0 * M_PI * s2);
  }
  if (radius_m > s.radius_m) return 0.0;
  return 1.0 / (M_PI * s.radius_m * s.radius_m);
}

double cell_edge_distance(double ap_density_per_m2) {
  if (!(ap_density_per_m2 > 0.0))
    throw std::domain_error("cell_edge_distance: ap density must be > 0");
  return std::sqrt(1.0 / (M_PI * ap_density_per_m2));
}

}  // namespace lpwa
