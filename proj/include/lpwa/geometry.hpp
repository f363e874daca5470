#pragma once

#include "lpwa/scenario.hpp"

#include <cmath>

namespace lpwa {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
  Point2D operator+(const Point2D& o) const { return {x + o.x, y + o.y}; }
  Point2D operator-(const Point2D& o) const { return {x - o.x, y - o.y}; }
};

// g(d) = 1/(alpha1 + alpha2 d^delta).  Throws std::domain_error at d = 0
// when alpha1 = 0; analytic and MC callers clamp to kPathlossClampM
// instead of evaluating the singularity.
double pathloss(const PathlossModel& m, double distance_m);

constexpr double kPathlossClampM = 1.0;

inline double pathloss_clamped(const PathlossModel& m, double distance_m,
                               double d_min = kPathlossClampM) {
  return pathloss(m, distance_m < d_min ? d_min : distance_m);
}

// Nakagami-m power fading density (Gamma with mean Omega).
double fading_pdf(const ChannelModel& ch, double q);

// Isotropic scattering density evaluated at a given offset radius.
double scattering_pdf(const ScatteringDensity& s, double radius_m);
inline double scattering_pdf(const ScatteringDensity& s, const Point2D& offset) {
  return scattering_pdf(s, offset.norm());
}

// d_eg = sqrt(1/(pi*lambda_a)): cell-edge distance for AP density lambda_a.
double cell_edge_distance(double ap_density_per_m2);

}  // namespace lpwa
