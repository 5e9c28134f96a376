#include "nsp/model.hpp"

#include <cmath>
#include <sstream>

#include "nsp/errors.hpp"

namespace nsp {

bool GasModel::gamma_in_theorem_range() const {
    return gamma > 6.0 / 5.0 && gamma <= 4.0 / 3.0 + 1e-9;
}

void GasModel::validate() const {
    if (!(mu > 0.0))
        throw domain_error("GasModel: mu must be positive");
    if (!(2.0 * mu + 3.0 * lambda >= 0.0))
        throw domain_error("GasModel: viscosity admissibility 2*mu + 3*lambda >= 0 violated");
    if (!(kappa > 0.0))
        throw domain_error("GasModel: kappa must be positive");
    if (!(gamma > 1.0 && gamma < 2.0))
        throw domain_error("GasModel: gamma must lie in (1, 2)");
}

double pressure(double rho, const GasModel& model) {
    if (rho < 0.0)
        throw domain_error("pressure: negative density");
    if (rho == 0.0) return 0.0;
    return model.kappa * std::pow(rho, model.gamma);
}

double sound_speed(double rho, const GasModel& model) {
    if (rho < 0.0)
        throw domain_error("sound_speed: negative density");
    if (rho == 0.0) return 0.0;
    return std::sqrt(model.kappa * model.gamma * std::pow(rho, model.gamma - 1.0));
}

double LagrangianState::cell_r_mid(std::size_t j) const {
    const double w0 = r[j] * r[j] * r[j];
    const double w1 = r[j + 1] * r[j + 1] * r[j + 1];
    return std::cbrt(0.5 * (w0 + w1));
}

double LagrangianState::max_geometry_residual() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < cells(); ++j) {
        const double dv = r[j + 1] * r[j + 1] * r[j + 1] - r[j] * r[j] * r[j];
        const double res = std::abs(rho[j] * dv / (3.0 * cell_dx(j)) - 1.0);
        worst = std::max(worst, res);
    }
    return worst;
}

void LagrangianState::rebuild_radii_from_density(double density_floor) {
    const std::size_t N = cells();
    double w = eps_radius * eps_radius * eps_radius;
    r[0] = eps_radius;
    for (std::size_t j = 0; j < N; ++j) {
        double rj = rho[j];
        if (j == N - 1 && density_floor > 0.0) rj = std::max(rj, density_floor);
        w += 3.0 * cell_dx(j) / rj;
        r[j + 1] = std::cbrt(w);
    }
}

void LagrangianState::validate() const {
    const std::size_t N = cells();
    if (N == 0 || x.size() != N + 1 || u.size() != N + 1 || r.size() != N + 1)
        throw domain_error("LagrangianState: inconsistent array sizes");
    if (x.front() != 0.0)
        throw domain_error("LagrangianState: x[0] must be 0");
    if (u.front() != 0.0)
        throw domain_error("LagrangianState: inner Dirichlet condition u[0] = 0 violated");
    if (r.front() != eps_radius)
        throw domain_error("LagrangianState: r[0] must equal eps_radius");
    for (std::size_t i = 0; i < N; ++i) {
        if (!(x[i + 1] > x[i]))
            throw domain_error("LagrangianState: x not strictly increasing");
        if (!(r[i + 1] > r[i]))
            throw domain_error("LagrangianState: r not strictly increasing");
        if (!(rho[i] > 0.0) || !std::isfinite(rho[i]))
            throw domain_error("LagrangianState: non-positive cell density");
    }
}

StressField stress(const LagrangianState& state, const GasModel& model) {
    const std::size_t N = state.cells();
    const double nu = model.nu();
    StressField out;
    out.F.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double flux_lo = state.u[j] * state.r[j] * state.r[j];
        const double flux_hi = state.u[j + 1] * state.r[j + 1] * state.r[j + 1];
        const double div_u = (flux_hi - flux_lo) / state.cell_dx(j);
        out.F[j] = pressure(state.rho[j], model) - nu * state.rho[j] * div_u;
    }
    return out;
}

} // namespace nsp
