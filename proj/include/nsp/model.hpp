#pragma once

#include <cstddef>
#include <vector>

namespace nsp {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Polytropic gas P = kappa * rho^gamma with constant Lame viscosities.
struct GasModel {
    double gamma = 4.0 / 3.0;
    double kappa = 1.0;
    double mu = 1.0;
    double lambda = 0.0;
    bool gravity_enabled = true;

    double nu() const { return lambda + 2.0 * mu; }

    /// Whether gamma lies in (6/5, 4/3], the range the energy analysis covers.
    bool gamma_in_theorem_range() const;

    /// Throws domain_error unless mu > 0, 2mu+3lambda >= 0, kappa > 0 and
    /// gamma in (1, 2).
    void validate() const;
};

double pressure(double rho, const GasModel& model);
double sound_speed(double rho, const GasModel& model);

/// One time level of the mass-coordinate discretization. Node quantities
/// (x, u, r) have N+1 entries, cell quantities (rho) have N. Cell j sits
/// between nodes j and j+1 and holds mass 4*pi*(x[j+1]-x[j]).
struct LagrangianState {
    std::vector<double> x;   ///< node mass coordinates, x[0]=0, x[N]=M/4pi
    std::vector<double> rho; ///< cell densities
    std::vector<double> u;   ///< node velocities, u[0]=0
    std::vector<double> r;   ///< node radii, strictly increasing, r[0]=eps
    double time = 0.0;
    double eps_radius = 0.0;
    /// Boundary radius integrated independently through the boundary ODE;
    /// |a_ode - r.back()| is the time-discretization consistency gap.
    double a_ode = 0.0;

    std::size_t cells() const { return rho.size(); }
    double a() const { return r.back(); }
    double total_mass() const { return 4.0 * kPi * x.back(); }
    double cell_dx(std::size_t j) const { return x[j + 1] - x[j]; }

    /// Radius at the cell's mass midpoint. Exact for piecewise-constant rho:
    /// r(x_mid)^3 = (r[j]^3 + r[j+1]^3)/2.
    double cell_r_mid(std::size_t j) const;

    /// max_j |rho[j]*(r[j+1]^3 - r[j]^3) / (3*dx_j) - 1|, the discrete volume
    /// identity residual.
    double max_geometry_residual() const;

    /// Rebuilds node radii from the cell densities by the cumulative volume
    /// relation. The floor (absolute density) guards the outermost cell only.
    void rebuild_radii_from_density(double density_floor = 0.0);

    /// Structural invariants: sizes, monotone x and r, positive rho, u[0]=0.
    void validate() const;
};

/// Effective viscous flux per cell, F = kappa*rho^gamma - nu*rho*(u r^2)_x.
struct StressField {
    std::vector<double> F;
};

StressField stress(const LagrangianState& state, const GasModel& model);

} // namespace nsp
