#pragma once

#include <cstddef>
#include <vector>

#include "nsp/model.hpp"

namespace nsp {

/// Scalar functionals monitored at one output time.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double E_kin = 0.0;  ///< integral (1/2) rho u^2 r^2 dr
    double E_int = 0.0;  ///< integral kappa rho^gamma/(gamma-1) r^2 dr
    double E_grav = 0.0; ///< 4 pi integral rho r (integral rho s^2 ds) dr
    double E_total = 0.0; ///< E_kin + E_int - E_grav
    double dissipation_cum = 0.0; ///< nu * time integral of (u_r + 2u/r)^2 r^2 dr
    double H = 0.0;
    double Y = 0.0;
    double a = 0.0;
    double a1 = 0.0;
    double mean_pressure = 0.0;      ///< (1/a^3) integral rho^gamma r^2 dr
    double pressure_integral = 0.0;  ///< integral rho^gamma r^2 dr (kappa-free)
    double weighted_pressure_cum = 0.0; ///< time integral of rho^{2 gamma} r^{12} dr
    long envelope_violations = 0;
    double stress_last_cell = 0.0; ///< |F| at the outermost cell
    double boundary_gap = 0.0;     ///< |r[N] - a_ode|
};

// Instantaneous integrals (cell-exact where the integrand depends only on the
// piecewise-constant density and the node radii; midpoint-in-mass where node
// velocities enter).
double kinetic_energy(const LagrangianState& state);
double internal_energy(const LagrangianState& state, const GasModel& model);
double pressure_integral(const LagrangianState& state, const GasModel& model);
double gravitational_energy(const LagrangianState& state);
/// Right-hand side of the potential identity:
/// (1/8 pi) integral r^2 Phi_r^2 dr + (2 pi / a) (M/4 pi)^2.
double gravitational_energy_potential_route(const LagrangianState& state);
/// integral (4 pi / r^2) (integral rho s^2 ds)^2 dr.
double potential_integral(const LagrangianState& state);
/// nu * integral (u_r + 2u/r)^2 r^2 dr via the Lagrangian divergence identity.
double dissipation_rate(const LagrangianState& state, const GasModel& model);

double H_functional(const LagrangianState& state, const GasModel& model, double t);
double Y_functional(const LagrangianState& state, const GasModel& model, double t);

/// Assembles every instantaneous field of a record; the cumulative fields are
/// supplied by the caller.
DiagnosticsRecord make_record(const LagrangianState& state, const GasModel& model, double t,
                              double dissipation_cum, double weighted_pressure_cum, double a1);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
    double C_xT = 0.0;
    double c_xT = 0.0;
};

/// Transport bounds rho0 e^{-c_{x,T}/nu} <= rho(x, t) <= rho0 e^{C_{x,T}/nu}
/// along the particle path of mass coordinate x_node, valid on [0, T].
/// rho0_max is the sup norm of the initial density entering c_{x,T}.
/// Overflowing exponentials saturate to [0, +inf).
Envelope transport_envelope(double x_node, double T, const GasModel& model, double E0, double M,
                            double C_gamma, double rho0_at_node, double rho0_max);

struct PathBoundReport {
    long node_violations = 0;
    long pair_violations = 0;
    long nodes_checked = 0;
    long pairs_checked = 0;
};

/// Particle-path lower bounds: r(x) >= (E0/C_gamma)^{-1/(3(gamma-1))} x^{gamma/(3(gamma-1))}
/// at every node, and the shell-separation bound
/// r^3(x2) - r^3(x1) >= (E0/C_gamma)^{-1/(gamma-1)} (x2-x1)^{gamma/(gamma-1)}
/// on node pairs (subsampled by pair_stride).
PathBoundReport path_lower_bounds(const LagrangianState& state, const GasModel& model, double E0,
                                  double C_gamma, std::size_t pair_stride = 7);

/// One rectangle-rule increment of the weighted pressure integral,
/// dt * integral rho^{2 gamma} r^{12} dr (exact per cell).
double weighted_pressure_increment(const LagrangianState& state, const GasModel& model, double dt);

struct ExpansionFit {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double beta_hat = 0.0;
    double beta_paper = 0.0; ///< (6 gamma - 7)/(3 gamma); equals 1/4 at gamma = 4/3
    double residual_rms = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log a1 against log(1+t) over [t_lo, t_hi].
/// Throws domain_error with fewer than 10 samples in the window.
ExpansionFit fit_expansion(const std::vector<double>& times, const std::vector<double>& a1,
                           double t_lo, double t_hi, double gamma);

} // namespace nsp
