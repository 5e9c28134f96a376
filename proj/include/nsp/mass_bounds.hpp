#pragma once

#include <string>

#include "nsp/model.hpp"
#include "nsp/stationary.hpp"

namespace nsp {

// Closed-form critical-mass algebra. All quantities here are the paper's
// kappa = 1 objects; the density integrals fed in are plain
// integral(rho^gamma r^2 dr) without the pressure constant.

/// True when gamma is within 1e-9 of the critical exponent 4/3 (configs
/// often carry it truncated).
bool gamma_is_four_thirds(double gamma);

/// B = (4 pi)^{1/(3(gamma-1))} * ( (4 pi)^{-2/3} / (2 * 3^{1/3}) + A_gamma / (8 pi) ).
double constant_B(double gamma, double A_gamma);

/// f(s) = s/(gamma-1) - B M^{(5 gamma - 6)/(3(gamma-1))} s^{1/(3(gamma-1))}.
double f_of_s(double s, double gamma, double M, double B);
double f_prime(double s, double gamma, double M, double B);

/// s* = (B/3)^{-3(gamma-1)/(4-3 gamma)} M^{-(5 gamma-6)/(4-3 gamma)}, the
/// maximizer of f. Only defined for gamma in (6/5, 4/3).
double s_star(double gamma, double M, double B);

/// Closed form of f(s*).
double f_at_s_star(double gamma, double M, double B);

/// Critical mass. gamma = 4/3 branch: (3/B)^{3/2}; otherwise the E0 branch.
double critical_mass(double gamma, double E0, double B);

/// Strict threshold M_bar < M_c; the gamma < 4/3 branch uses l*E0, l > 1.
double m_bar(double gamma, double E0, double B, double l);

/// C_gamma: (4-3 gamma)/(gamma-1) for gamma < 4/3, 3 - B M^{2/3} at gamma = 4/3.
double coercivity_constant(double gamma, double M, double B);

/// Largest alpha with alpha^{(4-3 gamma)/(3(gamma-1))} <= 1/2 (gamma < 4/3).
double largest_admissible_alpha(double gamma);

/// Smallest l for which the (l, alpha) constraint set is feasible.
double min_feasible_l(double gamma);

struct CriticalMassReport {
    double gamma = 0.0;
    double a_gamma = 0.0;
    double B = 0.0;
    double C_gamma = 0.0;
    double E0 = 0.0;
    double M = 0.0; ///< NaN when no mass was supplied
    double s_star = 0.0;
    double f_at_s_star = 0.0;
    double M_c = 0.0;
    double M_bar = 0.0;
    double l = 0.0;
    double alpha = 0.0; ///< NaN at gamma = 4/3 (the alpha device is not used there)
    std::string verdict; ///< supercritical | subcritical | strictly-subcritical
};

/// Assembles the full report. l = 0 or alpha = 0 request the defaults
/// (l = max(2, minimal feasible), alpha = largest admissible). M may be NaN,
/// in which case the mass-dependent fields are NaN and verdict is empty.
CriticalMassReport make_report(double gamma, double M, double E0, double A_gamma, double l = 0.0,
                               double alpha = 0.0);

struct PartitionReport {
    double pressure_integral = 0.0;      ///< integral rho^gamma r^2 dr
    double gravitational_integral = 0.0; ///< 4 pi integral rho r (integral rho s^2 ds) dr
    double internal = 0.0;               ///< pressure_integral / (gamma - 1)
    double C_gamma = 0.0;
    bool subcritical_bound_holds = false; ///< internal - grav >= C_gamma * pressure_integral
    bool strict_bound_holds = false;      ///< internal - grav >= pressure_integral / (2(gamma-1))
};

/// Evaluates both branches of the energy-partition lower bound on a state.
PartitionReport energy_partition_check(const LagrangianState& state, const GasModel& model,
                                       double B);

/// Convenience overload: grids the initial data at N cells first.
PartitionReport energy_partition_check(const InitialData& data, const GasModel& model, double B,
                                       std::size_t N = 2048);

} // namespace nsp
