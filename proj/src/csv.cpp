#include "nsp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nsp/errors.hpp"

namespace nsp {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    // trim
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.empty()) return std::nan("");
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw domain_error("parse_double: bad numeric field '" + std::string(s) + "'");
    return v;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary); // binary: byte-stable line endings
    if (!f) throw domain_error("cannot open for writing: " + path.string());
    return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open for reading: " + path.string());
    return f;
}

/// Parses `key=value` tokens from a `# ...` header line.
double header_value(const std::string& line, const std::string& key) {
    const std::string pat = key + "=";
    auto pos = line.find(pat);
    if (pos == std::string::npos)
        throw domain_error("snapshot header missing '" + key + "': " + line);
    auto end = line.find(' ', pos);
    return parse_double(std::string_view(line).substr(pos + pat.size(),
                                                      end == std::string::npos
                                                          ? std::string::npos
                                                          : end - pos - pat.size()));
}

} // namespace

static const char* kTimeSeriesColumns =
    "t,a,a1,mass,E_total,E_kin,E_int,E_grav,dissipation_cum,H,Y,mean_pressure";

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series) {
    auto f = open_out(path);
    f << kTimeSeriesColumns << "\n";
    for (const auto& r : series.records) {
        f << format_double(r.t) << ',' << format_double(r.a) << ',' << format_double(r.a1) << ','
          << format_double(r.mass) << ',' << format_double(r.E_total) << ','
          << format_double(r.E_kin) << ',' << format_double(r.E_int) << ','
          << format_double(r.E_grav) << ',' << format_double(r.dissipation_cum) << ','
          << format_double(r.H) << ',' << format_double(r.Y) << ','
          << format_double(r.mean_pressure) << "\n";
    }
}

std::size_t TimeSeriesTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw domain_error("timeseries: missing column '" + name + "'");
}

std::vector<double> TimeSeriesTable::column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.at(idx));
    return out;
}

TimeSeriesTable read_timeseries_csv(const std::filesystem::path& path) {
    auto f = open_in(path);
    TimeSeriesTable table;
    std::string line;
    if (!std::getline(f, line))
        throw domain_error("timeseries: empty file " + path.string());
    for (auto& c : split_csv(line)) table.columns.push_back(c);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != table.columns.size())
            throw domain_error("timeseries: ragged row in " + path.string());
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& s : fields) row.push_back(parse_double(s));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_snapshot_csv(const std::filesystem::path& path, const LagrangianState& state,
                        const GasModel& model) {
    auto f = open_out(path);
    f << "# t=" << format_double(state.time) << " gamma=" << format_double(model.gamma)
      << " M=" << format_double(state.total_mass()) << "\n";
    f << "x,r,rho,u,F\n";
    const StressField sf = stress(state, model);
    const std::size_t N = state.cells();
    for (std::size_t i = 0; i <= N; ++i) {
        f << format_double(state.x[i]) << ',' << format_double(state.r[i]) << ',';
        if (i < N) f << format_double(state.rho[i]);
        f << ',' << format_double(state.u[i]) << ',';
        if (i < N) f << format_double(sf.F[i]);
        f << "\n";
    }
}

SnapshotData read_snapshot_csv(const std::filesystem::path& path) {
    auto f = open_in(path);
    SnapshotData snap;
    std::string line;
    if (!std::getline(f, line) || line.empty() || line[0] != '#')
        throw domain_error("snapshot: missing header line in " + path.string());
    snap.t = header_value(line, "t");
    snap.gamma = header_value(line, "gamma");
    snap.M = header_value(line, "M");
    if (!std::getline(f, line))
        throw domain_error("snapshot: missing column line in " + path.string());

    LagrangianState& s = snap.state;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5)
            throw domain_error("snapshot: expected 5 columns in " + path.string());
        s.x.push_back(parse_double(fields[0]));
        s.r.push_back(parse_double(fields[1]));
        s.u.push_back(parse_double(fields[3]));
        if (!fields[2].empty()) s.rho.push_back(parse_double(fields[2]));
        if (!fields[4].empty()) snap.F.push_back(parse_double(fields[4]));
    }
    if (s.x.size() != s.rho.size() + 1)
        throw domain_error("snapshot: node/cell count mismatch in " + path.string());
    s.time = snap.t;
    s.eps_radius = s.r.front();
    s.a_ode = s.r.back();
    return snap;
}

void write_profile_csv(const std::filesystem::path& path, const LaneEmdenProfile& profile) {
    auto f = open_out(path);
    f << "# n=" << format_double(profile.n) << " xi1=" << format_double(profile.xi1) << "\n";
    f << "xi,theta\n";
    for (std::size_t i = 0; i < profile.xi.size(); ++i)
        f << format_double(profile.xi[i]) << ',' << format_double(profile.theta[i]) << "\n";
}

} // namespace nsp
