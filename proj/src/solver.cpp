#include "nsp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsp/errors.hpp"
#include "nsp/quadrature.hpp"
#include "nsp/tridiagonal.hpp"

namespace nsp {

void SolverConfig::validate() const {
    if (N < 8)
        throw domain_error("SolverConfig: N must be at least 8");
    if (!(cfl_acoustic > 0.0 && cfl_acoustic <= 1.0))
        throw domain_error("SolverConfig: cfl_acoustic must lie in (0, 1]");
    if (!(viscous_theta >= 0.5 && viscous_theta <= 1.0))
        throw domain_error("SolverConfig: viscous_theta must lie in [1/2, 1]");
    if (!(dt_min > 0.0) || !(dt_min < dt_max))
        throw domain_error("SolverConfig: need 0 < dt_min < dt_max");
    if (!(t_end >= 0.0))
        throw domain_error("SolverConfig: t_end must be nonnegative");
    if (!(output_interval > 0.0))
        throw domain_error("SolverConfig: output_interval must be positive");
    if (!(density_floor_rel >= 0.0))
        throw domain_error("SolverConfig: density_floor_rel must be nonnegative");
}

std::vector<double> TimeSeries::times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.t);
    return out;
}

std::vector<double> TimeSeries::boundary_radius() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.a);
    return out;
}

std::vector<double> TimeSeries::running_max_radius() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.a1);
    return out;
}

LagrangianState eulerian_to_lagrangian(const InitialData& data, std::size_t N) {
    if (N < 2)
        throw domain_error("eulerian_to_lagrangian: need at least 2 cells");
    const double eps = data.eps;
    const double a0 = data.a0;
    auto integrand = [&](double y) { return data.rho0(y) * y * y; };

    // Cumulative mass table on a fine radial grid, then per-node inversion.
    const std::size_t K = std::max<std::size_t>(4096, 16 * N);
    std::vector<double> r_fine(K + 1), cum(K + 1);
    const double dr = (a0 - eps) / static_cast<double>(K);
    r_fine[0] = eps;
    cum[0] = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        r_fine[k] = eps + dr * static_cast<double>(k);
        cum[k] = cum[k - 1] + gauss5(integrand, r_fine[k - 1], r_fine[k]);
    }
    const double x_total = cum[K];
    if (!(x_total > 0.0))
        throw domain_error("eulerian_to_lagrangian: initial data carries no mass");

    LagrangianState s;
    s.eps_radius = eps;
    s.time = 0.0;
    s.x.resize(N + 1);
    s.r.resize(N + 1);
    s.u.resize(N + 1);
    s.rho.resize(N);

    const double dx = x_total / static_cast<double>(N);
    s.x[0] = 0.0;
    s.r[0] = eps;
    for (std::size_t i = 1; i < N; ++i) {
        const double target = dx * static_cast<double>(i);
        s.x[i] = target;
        // locate the fine panel, then bisect inside it
        auto it = std::lower_bound(cum.begin(), cum.end(), target);
        std::size_t k = static_cast<std::size_t>(it - cum.begin());
        if (k > 0) --k;
        k = std::min(k, K - 1);
        double lo = r_fine[k], hi = r_fine[k + 1];
        const double base = cum[k];
        for (int iter = 0; iter < 100 && (hi - lo) > 1e-15 * a0; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double val = base + gauss5(integrand, r_fine[k], mid);
            (val < target ? lo : hi) = mid;
        }
        s.r[i] = 0.5 * (lo + hi);
    }
    s.x[N] = x_total;
    s.r[N] = a0;
    s.a_ode = a0;

    for (std::size_t j = 0; j < N; ++j) {
        const double dv = s.r[j + 1] * s.r[j + 1] * s.r[j + 1] - s.r[j] * s.r[j] * s.r[j];
        s.rho[j] = 3.0 * dx / dv;
    }
    for (std::size_t i = 1; i <= N; ++i) s.u[i] = data.u0(s.r[i]);
    s.u[0] = 0.0;
    s.validate();
    return s;
}

std::vector<double> gravity_acceleration(const LagrangianState& s, const GasModel& model) {
    std::vector<double> g(s.x.size(), 0.0);
    if (!model.gravity_enabled) return g;
    for (std::size_t i = 1; i < s.x.size(); ++i)
        g[i] = -4.0 * kPi * s.x[i] / (s.r[i] * s.r[i]);
    return g;
}

double choose_dt(const LagrangianState& s, const GasModel& model, const SolverConfig& config) {
    double dt = config.dt_max;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double width = s.r[j + 1] - s.r[j];
        const double cs = sound_speed(s.rho[j], model);
        const double vel = std::max(std::abs(s.u[j]), std::abs(s.u[j + 1]));
        const double denom = cs + vel;
        if (denom > 0.0) dt = std::min(dt, config.cfl_acoustic * width / denom);
    }
    return std::clamp(dt, config.dt_min, config.dt_max);
}

namespace {

/// One attempted step at fixed dt. Returns false on shell crossing (the state
/// is left untouched in that case).
bool try_step(LagrangianState& s, const GasModel& model, const SolverConfig& config, double dt) {
    const std::size_t N = s.cells();
    const double dx = s.cell_dx(0); // equal-mass grid per the transform contract
    const double nu = model.nu();
    const double theta = config.viscous_theta;

    std::vector<double> P(N);
    for (std::size_t j = 0; j < N; ++j) P[j] = pressure(s.rho[j], model);
    const std::vector<double> g = gravity_acceleration(s, model);

    // (u r^2)_x per cell with the pre-step velocities, for the explicit part.
    std::vector<double> div_u(N);
    for (std::size_t j = 0; j < N; ++j) {
        div_u[j] = (s.u[j + 1] * s.r[j + 1] * s.r[j + 1] - s.u[j] * s.r[j] * s.r[j]) / dx;
    }

    // Unknowns v[1..N]; node 0 is pinned. Row i of the tridiagonal system:
    //   v_i - dt theta nu r_i^2 ( rho_i D_i(v) - rho_{i-1} D_{i-1}(v) ) / dx = rhs_i
    // with D_j(v) = (v_{j+1} r_{j+1}^2 - v_j r_j^2)/dx. The boundary row uses
    // the ghost stress F = 0 with the one-sided dx/2 gradient.
    const std::size_t rows = config.pin_outer_boundary ? N - 1 : N;
    std::vector<double> sub(rows), diag(rows), sup(rows), rhs(rows);

    const double c_imp = dt * theta * nu / (dx * dx);
    const double c_exp = (1.0 - theta) * nu / dx;

    for (std::size_t i = 1; i <= rows; ++i) {
        const double ri2 = s.r[i] * s.r[i];
        const std::size_t k = i - 1;
        if (i < N) {
            sub[k] = -c_imp * ri2 * s.rho[i - 1] * s.r[i - 1] * s.r[i - 1];
            diag[k] = 1.0 + c_imp * ri2 * (s.rho[i] + s.rho[i - 1]) * ri2;
            sup[k] = -c_imp * ri2 * s.rho[i] * s.r[i + 1] * s.r[i + 1];
            const double visc_exp = c_exp * ri2 * (s.rho[i] * div_u[i] - s.rho[i - 1] * div_u[i - 1]);
            rhs[k] = s.u[i] + dt * (-ri2 * (P[i] - P[i - 1]) / dx + g[i] + visc_exp);
        } else {
            // free boundary node: -r^2 (0 - F_{N-1}) / (dx/2)
            sub[k] = -2.0 * c_imp * ri2 * s.rho[N - 1] * s.r[N - 1] * s.r[N - 1];
            diag[k] = 1.0 + 2.0 * c_imp * ri2 * s.rho[N - 1] * ri2;
            sup[k] = 0.0;
            rhs[k] = s.u[i] + dt * (2.0 * ri2 / dx *
                                        (P[N - 1] - (1.0 - theta) * nu * s.rho[N - 1] * div_u[N - 1]) +
                                    g[i]);
        }
    }
    solve_tridiagonal(sub, diag, sup, rhs);

    std::vector<double> u_new(N + 1, 0.0);
    for (std::size_t i = 1; i <= rows; ++i) u_new[i] = rhs[i - 1];
    if (config.pin_outer_boundary) u_new[N] = 0.0;

    // Geometry update with the new velocities; reject on shell crossing.
    std::vector<double> r_new(N + 1);
    r_new[0] = s.r[0];
    for (std::size_t i = 1; i <= N; ++i) {
        r_new[i] = s.r[i] + dt * u_new[i];
        if (!(r_new[i] > r_new[i - 1]) || !std::isfinite(r_new[i])) return false;
    }

    std::vector<double> rho_new(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double dv =
            r_new[j + 1] * r_new[j + 1] * r_new[j + 1] - r_new[j] * r_new[j] * r_new[j];
        rho_new[j] = 3.0 * dx / dv;
        if (!(rho_new[j] > 0.0) || !std::isfinite(rho_new[j])) return false;
    }

    s.a_ode += dt * 0.5 * (s.u[N] + u_new[N]);
    s.u = std::move(u_new);
    s.r = std::move(r_new);
    s.rho = std::move(rho_new);
    s.time += dt;
    return true;
}

} // namespace

double step(LagrangianState& s, const GasModel& model, const SolverConfig& config, double dt_cap) {
    double dt = std::min(choose_dt(s, model, config), dt_cap);
    while (true) {
        if (try_step(s, model, config, dt)) return dt;
        dt *= 0.5;
        // only a rejected step may drive dt below the floor; a small cap from
        // landing on an output time is fine
        if (dt < config.dt_min) {
            double width = s.r[1] - s.r[0];
            for (std::size_t j = 1; j < s.cells(); ++j)
                width = std::min(width, s.r[j + 1] - s.r[j]);
            std::ostringstream msg;
            msg << "step: dt underflow (dt = " << dt << " < dt_min = " << config.dt_min
                << ") after shell-crossing rejections at t = " << s.time << ", a = " << s.a()
                << ", min cell width = " << width;
            throw numerical_error(msg.str());
        }
    }
}

TimeSeries run(const InitialData& data, const GasModel& model, const SolverConfig& config) {
    model.validate();
    config.validate();
    LagrangianState s = eulerian_to_lagrangian(data, config.N);
    const double dx0 = s.cell_dx(0);
    for (std::size_t j = 1; j < s.cells(); ++j) {
        if (std::abs(s.cell_dx(j) - dx0) > 1e-12 * dx0)
            throw domain_error("run: the integrator requires the equal-mass grid");
    }

    TimeSeries series;
    double dissipation_cum = 0.0;
    double weighted_pressure_cum = 0.0;
    double a1 = s.a();
    double phi_prev = dissipation_rate(s, model);

    auto emit = [&](double t) {
        series.records.push_back(
            make_record(s, model, t, dissipation_cum, weighted_pressure_cum, a1));
        series.snapshots.push_back(s);
    };
    emit(0.0);

    const double t_end = config.t_end;
    double next_out = std::min(config.output_interval, t_end);
    const double t_tiny = 1e-12 * std::max(t_end, 1.0);

    while (s.time < t_end - t_tiny) {
        const double cap = std::min(next_out, t_end) - s.time;
        const double dt = step(s, model, config, cap);

        const double phi_new = dissipation_rate(s, model);
        dissipation_cum += dt * 0.5 * (phi_prev + phi_new);
        phi_prev = phi_new;
        weighted_pressure_cum += weighted_pressure_increment(s, model, dt);
        a1 = std::max(a1, s.a());
        series.boundary_gap_max =
            std::max(series.boundary_gap_max, std::abs(s.r.back() - s.a_ode));

        if (s.time >= next_out - t_tiny) {
            emit(s.time);
            next_out = std::min(next_out + config.output_interval, t_end);
        }
    }
    if (series.records.back().t < t_end - t_tiny) emit(s.time);
    return series;
}

} // namespace nsp
