#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nsp/model.hpp"

namespace nsp {

/// Dimensionless polytrope theta(xi) solving
///   theta'' + (2/xi) theta' + theta^n = 0,  theta(0)=1, theta'(0)=0,
/// with n = 1/(gamma-1), plus the physical rescaling attached by
/// rescale_profile.
struct LaneEmdenProfile {
    double gamma = 0.0;
    double n = 0.0;
    std::vector<double> xi;
    std::vector<double> theta;
    std::vector<double> dtheta; ///< theta'
    double xi1 = std::numeric_limits<double>::infinity();
    bool finite_support = false;
    double dtheta_at_xi1 = 0.0; ///< theta'(xi1), 0 when support is infinite

    // Physical rescaling (set by rescale_profile; zero until then).
    double rho_c = 0.0;
    double length_scale = 0.0; ///< r = length_scale * xi
    double physical_radius = 0.0;
    double physical_mass = 0.0;

    /// theta at arbitrary xi by monotone-safe local interpolation of the
    /// stored dense solution (cubic Hermite on the bracketing interval).
    double theta_at(double x) const;
    double dtheta_at(double x) const;
};

/// Integrates the Lane-Emden equation from a series start near xi = 0 and
/// locates the first zero when n < 5. For n >= 5 the profile is flagged as
/// infinite-support and integrated up to xi_max.
/// Throws domain_error for gamma outside (1, 2], and a support-not-found
/// error when n < 5 but no zero is bracketed before xi_max.
LaneEmdenProfile solve_lane_emden(double gamma, double tol = 1e-10, double xi_max = 2000.0);

/// Attaches central density rho_c and the physical length/mass scales for the
/// gas model (uses kappa; G = 1 in the Poisson convention used throughout).
void rescale_profile(LaneEmdenProfile& profile, double rho_c, const GasModel& model);

/// Admissible initial data on [eps, a0]: positive density vanishing at a0,
/// velocity with u0(eps) = 0 and the stress-free compatibility
/// u0'(a0) + 2 u0(a0)/a0 = 0.
struct InitialData {
    std::function<double(double)> rho0;
    std::function<double(double)> u0;
    std::function<double(double)> du0_dr;
    double eps = 0.0;
    double a0 = 0.0;
    double M = 0.0;  ///< 4 pi * integral of rho0 r^2 dr over [eps, a0]
    double E0 = 0.0; ///< integral of (rho0 u0^2 / 2 + kappa rho0^gamma/(gamma-1)) r^2 dr
    double rho0_max = 0.0;
    double mass_defect = 0.0; ///< 4 pi * integral over the discarded [0, eps) ball
    double hydrostatic_residual = -1.0;
    double gamma = 0.0;
    double kappa = 1.0;

    void validate() const;
};

/// Rescales a Lane-Emden profile to physical initial data with u0 = 0,
/// restricted to [eps, a0] (the mass in [0, eps) is reported as mass_defect).
/// An infinite-support profile must supply a positive truncation density
/// floor; the floor value is subtracted so the density still vanishes at a0.
/// target_mass > 0 rescales the density amplitude so M equals it.
/// residual_samples controls the grid of the reported hydrostatic residual.
InitialData hydrostatic_initial_data(const LaneEmdenProfile& profile, double rho_c, double eps,
                                     const GasModel& model, double truncation_floor = 0.0,
                                     double target_mass = 0.0,
                                     std::size_t residual_samples = 2048);

/// Testing profile: density rho_bar on [eps, a0] with a C^1 taper to zero
/// over the outer taper_fraction of the radius so the vacuum boundary
/// condition still holds. u0 = 0.
InitialData uniform_initial_data(double rho_bar, double a0, double eps, const GasModel& model,
                                 double taper_fraction = 0.05);

/// Adds u0(r) = amplitude * v(r) on top of a zero-velocity base, where v is
/// the built-in cubic shape satisfying v(eps) = 0, the compatibility
/// condition at a0 and v(a0) = 1. Recomputes E0.
InitialData perturbed_initial_data(const InitialData& base, double velocity_amplitude,
                                   const std::string& mode = "cubic");

/// Forward-difference hydrostatic balance residual
///   max | d_r(kappa rho^gamma) + (4 pi rho / r^2) * enclosed(r) |
/// over a uniform r-grid of `samples` points on [eps, a0].
double hydrostatic_residual(const LaneEmdenProfile& profile, double eps, double a0,
                            double amplitude_scale, const GasModel& model, std::size_t samples);

} // namespace nsp
