#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "nsp/diagnostics.hpp"
#include "nsp/model.hpp"
#include "nsp/stationary.hpp"

namespace nsp {

struct SolverConfig {
    std::size_t N = 200;
    double eps_radius = -1.0; ///< < 0: resolved from the profile before gridding
    double cfl_acoustic = 0.5;
    double viscous_theta = 1.0; ///< implicitness of the viscous operator, [1/2, 1]
    double t_end = 1.0;
    double output_interval = 0.1;
    double dt_max = 1.0;
    double dt_min = 1e-12;
    double density_floor_rel = 1e-14; ///< times the initial max density; geometry only
    bool pin_outer_boundary = false;  ///< testing switch: Dirichlet u = 0 at x = M/4pi

    void validate() const;
};

struct TimeSeries {
    std::vector<DiagnosticsRecord> records;
    std::vector<LagrangianState> snapshots; ///< one per record
    double boundary_gap_max = 0.0;

    std::vector<double> times() const;
    std::vector<double> boundary_radius() const;
    std::vector<double> running_max_radius() const;
};

/// Equal-mass-per-cell grid of the initial data: dx = (M/4pi)/N, node radii
/// from inverting the cumulative mass integral, cell densities from the
/// discrete volume relation (so the geometric identity holds exactly and the
/// total mass is preserved by construction).
LagrangianState eulerian_to_lagrangian(const InitialData& data, std::size_t N);

/// -4 pi x / r^2 per node (zeros when gravity is disabled). Node 0 is
/// Dirichlet-pinned and reported as zero.
std::vector<double> gravity_acceleration(const LagrangianState& state, const GasModel& model);

/// Acoustic CFL step: cfl * min_j (r[j+1]-r[j]) / (c_s + |u|), clamped to
/// [dt_min, dt_max]. The implicit viscous term imposes no restriction.
double choose_dt(const LagrangianState& state, const GasModel& model, const SolverConfig& config);

/// One operator-split step: theta-implicit viscous / explicit pressure+gravity
/// velocity update (tridiagonal solve), node radii advanced with the updated
/// velocities, densities recomputed from cell volumes, boundary ODE advanced
/// by the trapezoid rule. Shell crossings reject the step and halve dt; below
/// dt_min a numerical_error with a diagnostic dump is thrown.
/// Returns the dt actually used (never above dt_cap).
double step(LagrangianState& state, const GasModel& model, const SolverConfig& config,
            double dt_cap = std::numeric_limits<double>::infinity());

/// Integrates to t_end, emitting one record per output interval (plus t = 0
/// and t_end). Dissipation is accumulated by the trapezoid rule in time, the
/// weighted pressure integral by the rectangle rule.
TimeSeries run(const InitialData& data, const GasModel& model, const SolverConfig& config);

} // namespace nsp
