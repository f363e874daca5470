#pragma once

#include "lpwa/interference.hpp"
#include "lpwa/quadrature.hpp"
#include "lpwa/scenario.hpp"

#include <stdexcept>

namespace lpwa {

struct UnsupportedFading : std::domain_error {
  using std::domain_error::domain_error;
};

// Evaluation route for the success probability.
enum class SuccessMethod {
  ClosedApprox,    // homogenized closed form (exact cluster integral)
  ExactNumericM1,  // Laplace-functional route, exact for Rayleigh fading
  RemarkApprox,    // closed form with the cluster term at its far-field limit
};


// Field integral H(z, 1, xi) for the pure power law g = alpha d^-delta;
// finite only for delta > 2.
double h_field(double z_m, double xi, double delta);

// Same integral by truncated quadrature for an arbitrary pathloss model.
// Pass upper_m = kInf for the untruncated oracle.
double h_field_quadrature(double z_m, double xi, const PathlossModel& pl,
                          const QuadratureSpec& spec, double upper_m);

// Cluster integral H(z, f*, xi) for delta = 4 and normal scattering, in
// si/ci closed form (asymptotic expansion at large argument).
double h_cluster(double z_m, double xi, double sigma_m);

// Far-field shortcut: exactly 1 once sqrt(xi) z^2/(4 sigma^2) passes the
// threshold, the closed form below it.
double h_cluster_remark(double z_m, double xi, double sigma_m,
                        double threshold = 20.0);

// Density of the self-convolved scattering kernel at a given radius.
double self_convolution_pdf(const ScatteringDensity& base, double radius_m);

// Cluster integral by quadrature against the self-convolved kernel.
double h_cluster_quadrature(double z_m, double xi, const PathlossModel& pl,
                            const ScatteringDensity& base,
                            const QuadratureSpec& spec);

// Success probability for a type-i device at distance z from its AP.
double p_success_at(const IoTTypeSpec& i, double z_m, const Scenario& sc,
                    SuccessMethod method, const QuadratureSpec& spec = {});

// CDF / density of the distance to the ell-th nearest AP of a PPP.
double nearest_ap_cdf(int ell, double ap_density, double r_m);
double nearest_ap_pdf(int ell, double ap_density, double r_m);

// Spatial success probability over the AP distance distribution.
// The closed route needs delta = 4 power-law pathloss, normal scattering
// and m = 1; the numeric route integrates the distance distribution
// directly with the chosen per-distance method.
double p_success_spatial_closed(const IoTTypeSpec& i, const Scenario& sc);
double p_success_spatial_numeric(const IoTTypeSpec& i, const Scenario& sc,
                                 SuccessMethod inner = SuccessMethod::ClosedApprox,
                                 const QuadratureSpec& spec = {});
double p_success_spatial(const IoTTypeSpec& i, const Scenario& sc,
                         SuccessMethod method, const QuadratureSpec& spec = {});

// Legacy variant of the closed spatial form predating the
// completed-square consistency fix; kept only so reports can quantify
// its deviation from the quadrature route.  Not used by any solver.
double p_success_spatial_closed_legacy(const IoTTypeSpec& i, const Scenario& sc);

// Outage after n_i * B_i replica transmissions.
double outage_probability(double p_s, int replicas, int retx_bound);
double outage(const IoTTypeSpec& i, double p_s_spatial);

}  // namespace lpwa
