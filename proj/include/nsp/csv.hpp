#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nsp/model.hpp"
#include "nsp/solver.hpp"
#include "nsp/stationary.hpp"

namespace nsp {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);
double parse_double(std::string_view s);

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series);

struct TimeSeriesTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const; ///< throws if absent
    std::vector<double> column(const std::string& name) const;
};

TimeSeriesTable read_timeseries_csv(const std::filesystem::path& path);

/// Snapshot CSV: header line `# t=<time> gamma=<g> M=<m>`, then columns
/// x,r,rho,u,F with one row per node; the cell columns (rho, F) are empty on
/// the last row.
void write_snapshot_csv(const std::filesystem::path& path, const LagrangianState& state,
                        const GasModel& model);

struct SnapshotData {
    LagrangianState state;
    std::vector<double> F;
    double t = 0.0;
    double gamma = 0.0;
    double M = 0.0;
};

SnapshotData read_snapshot_csv(const std::filesystem::path& path);

/// Lane-Emden profile CSV: header `# n=<n> xi1=<xi1>`, columns xi,theta.
void write_profile_csv(const std::filesystem::path& path, const LaneEmdenProfile& profile);

} // namespace nsp
