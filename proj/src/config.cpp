#include "nsp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nsp/csv.hpp"
#include "nsp/errors.hpp"
#include "nsp/quadrature.hpp"

namespace nsp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class KeyMap {
public:
    explicit KeyMap(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw domain_error("config line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw domain_error("config line " + std::to_string(lineno) + ": empty key or value");
            if (values_.count(key))
                throw domain_error("config: duplicate key '" + key + "'");
            values_[key] = val;
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string require_string(const std::string& key) {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end())
            throw domain_error("config: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_number(key, it->second);
    }

    double require_double(const std::string& key) { return parse_number(key, require_string(key)); }

    std::size_t get_size(const std::string& key, std::size_t fallback) {
        const double v = get_double(key, static_cast<double>(fallback));
        if (v < 0 || v != std::floor(v))
            throw domain_error("config: key '" + key + "' must be a nonnegative integer");
        return static_cast<std::size_t>(v);
    }

    bool get_bool(const std::string& key, bool fallback) {
        const std::string v = get_string(key, fallback ? "true" : "false");
        if (v == "true" || v == "1" || v == "on") return true;
        if (v == "false" || v == "0" || v == "off") return false;
        throw domain_error("config: key '" + key + "' must be a boolean");
    }

    void reject_unknown() const {
        for (const auto& [key, val] : values_) {
            if (!used_.count(key))
                throw domain_error("config: unknown key '" + key + "'");
        }
    }

private:
    double parse_number(const std::string& key, const std::string& raw) {
        try {
            return parse_double(raw);
        } catch (const domain_error&) {
            throw domain_error("config: key '" + key + "' has non-numeric value '" + raw + "'");
        }
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

} // namespace

RunConfig parse_config(const std::string& text) {
    KeyMap keys(text);
    RunConfig cfg;

    cfg.gas.gamma = keys.require_double("gamma");
    cfg.gas.kappa = keys.get_double("kappa", 1.0);
    cfg.gas.mu = keys.require_double("mu");
    cfg.gas.lambda = keys.require_double("lambda");
    cfg.gas.gravity_enabled = keys.get_bool("gravity", true);

    cfg.solver.N = keys.get_size("N", 0);
    if (cfg.solver.N == 0) throw domain_error("config: missing required key 'N'");
    cfg.solver.t_end = keys.require_double("t_end");
    cfg.solver.eps_radius = keys.get_double("eps_radius", -1.0);
    cfg.solver.cfl_acoustic = keys.get_double("cfl_acoustic", 0.5);
    cfg.solver.viscous_theta = keys.get_double("viscous_theta", 1.0);
    cfg.solver.output_interval =
        keys.get_double("output_interval", std::max(cfg.solver.t_end / 100.0, 1e-6));
    cfg.solver.dt_max = keys.get_double("dt_max", 1.0);
    cfg.solver.dt_min = keys.get_double("dt_min", 1e-12);
    cfg.solver.density_floor_rel = keys.get_double("density_floor_rel", 1e-14);
    cfg.solver.pin_outer_boundary = keys.get_bool("pin_outer_boundary", false);

    cfg.initial = keys.require_string("initial");
    cfg.rho_c = keys.get_double("rho_c", 1.0);
    cfg.truncation_floor = keys.get_double("truncation_floor", 0.0);
    cfg.target_mass = keys.get_double("target_mass", 0.0);
    cfg.uniform_rho = keys.get_double("uniform_rho", 1.0);
    cfg.a0 = keys.get_double("a0", 1.0);
    cfg.profile_file = keys.get_string("profile_file", "");
    cfg.perturb_amplitude = keys.get_double("perturb_amplitude", 0.0);
    cfg.perturb_mode = keys.get_string("perturb_mode", "cubic");

    cfg.a_gamma = keys.get_double("a_gamma", 1.0);
    cfg.l = keys.get_double("l", 0.0);
    cfg.alpha = keys.get_double("alpha", 0.0);

    cfg.output_dir = keys.get_string("output_dir", "");
    cfg.seed_label = keys.get_string("seed_label", "");

    keys.reject_unknown();

    // Simulation mode runs inside the analysis-backed range.
    if (!(cfg.gas.gamma > 6.0 / 5.0 && cfg.gas.gamma <= 4.0 / 3.0 + 1e-9))
        throw domain_error("config: key 'gamma' out of range: simulation requires gamma in "
                           "(6/5, 4/3]");
    cfg.gas.validate();
    cfg.solver.validate();

    if (cfg.initial != "lane-emden" && cfg.initial != "uniform" && cfg.initial != "file")
        throw domain_error("config: key 'initial' must be lane-emden, uniform or file");
    if (cfg.initial == "lane-emden" && !(cfg.rho_c > 0.0))
        throw domain_error("config: key 'rho_c' must be positive");
    if (cfg.initial == "uniform" && !(cfg.uniform_rho > 0.0 && cfg.a0 > 0.0))
        throw domain_error("config: keys 'uniform_rho' and 'a0' must be positive");
    if (cfg.initial == "file" && cfg.profile_file.empty())
        throw domain_error("config: key 'profile_file' required for initial = file");
    if (!(cfg.a_gamma > 0.0))
        throw domain_error("config: key 'a_gamma' must be positive");
    if (!(cfg.target_mass >= 0.0))
        throw domain_error("config: key 'target_mass' must be nonnegative");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string RunConfig::to_text() const {
    std::ostringstream out;
    auto put = [&](const std::string& k, const std::string& v) { out << k << " = " << v << "\n"; };
    auto putd = [&](const std::string& k, double v) { put(k, format_double(v)); };
    putd("gamma", gas.gamma);
    putd("kappa", gas.kappa);
    putd("mu", gas.mu);
    putd("lambda", gas.lambda);
    put("gravity", gas.gravity_enabled ? "true" : "false");
    putd("N", static_cast<double>(solver.N));
    putd("t_end", solver.t_end);
    putd("eps_radius", solver.eps_radius);
    putd("cfl_acoustic", solver.cfl_acoustic);
    putd("viscous_theta", solver.viscous_theta);
    putd("output_interval", solver.output_interval);
    putd("dt_max", solver.dt_max);
    putd("dt_min", solver.dt_min);
    putd("density_floor_rel", solver.density_floor_rel);
    put("pin_outer_boundary", solver.pin_outer_boundary ? "true" : "false");
    put("initial", initial);
    putd("rho_c", rho_c);
    putd("truncation_floor", truncation_floor);
    putd("target_mass", target_mass);
    putd("uniform_rho", uniform_rho);
    putd("a0", a0);
    if (!profile_file.empty()) put("profile_file", profile_file);
    putd("perturb_amplitude", perturb_amplitude);
    put("perturb_mode", perturb_mode);
    putd("a_gamma", a_gamma);
    putd("l", l);
    putd("alpha", alpha);
    if (!output_dir.empty()) put("output_dir", output_dir);
    if (!seed_label.empty()) put("seed_label", seed_label);
    return out.str();
}

namespace {

InitialData file_initial_data(const RunConfig& cfg) {
    std::ifstream f(cfg.profile_file);
    if (!f) throw domain_error("initial profile: cannot open " + cfg.profile_file);
    std::vector<double> rs, rhos, us;
    std::string line;
    bool header_skipped = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_skipped) {
            header_skipped = true;
            if (line.find("r,") == 0 || line.find("r ,") == 0) continue;
        }
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c, ','))
            throw domain_error("initial profile: expected columns r,rho,u");
        rs.push_back(parse_double(a));
        rhos.push_back(parse_double(b));
        us.push_back(parse_double(c));
    }
    if (rs.size() < 4) throw domain_error("initial profile: too few samples");
    for (std::size_t i = 1; i < rs.size(); ++i)
        if (!(rs[i] > rs[i - 1]))
            throw domain_error("initial profile: radii must be strictly increasing");

    auto interp = [](std::vector<double> xs, std::vector<double> ys) {
        return [xs = std::move(xs), ys = std::move(ys)](double x) {
            if (x <= xs.front()) return ys.front();
            if (x >= xs.back()) return ys.back();
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
            const double s = (x - xs[i]) / (xs[i + 1] - xs[i]);
            return ys[i] + s * (ys[i + 1] - ys[i]);
        };
    };

    InitialData d;
    d.gamma = cfg.gas.gamma;
    d.kappa = cfg.gas.kappa;
    d.eps = rs.front();
    d.a0 = rs.back();
    d.rho0 = interp(rs, rhos);
    d.u0 = interp(rs, us);
    const double du_last = (us.back() - us[us.size() - 2]) / (rs.back() - rs[rs.size() - 2]);
    auto u_interp = d.u0;
    const double a0 = d.a0, eps = d.eps;
    d.du0_dr = [u_interp, du_last, a0, eps](double r) {
        if (r >= a0 * (1.0 - 1e-12)) return du_last;
        const double h = 1e-7 * (a0 - eps);
        return (u_interp(r + h) - u_interp(std::max(r - h, eps))) /
               (std::min(r + h, a0) - std::max(r - h, eps));
    };
    d.rho0_max = *std::max_element(rhos.begin(), rhos.end());
    auto mass_integrand = [&](double r) { return d.rho0(r) * r * r; };
    const double tol = 1e-13 * d.rho0_max * d.a0 * d.a0 * d.a0;
    d.M = 4.0 * kPi * integrate(mass_integrand, d.eps, d.a0, tol);
    d.E0 = integrate(
        [&](double r) {
            const double uu = d.u0(r);
            return (0.5 * d.rho0(r) * uu * uu +
                    cfg.gas.kappa / (cfg.gas.gamma - 1.0) * std::pow(d.rho0(r), cfg.gas.gamma)) *
                   r * r;
        },
        d.eps, d.a0, tol);
    d.validate();
    return d;
}

/// Radius of the shell enclosing 1/N of the profile mass, used for the
/// default inner cutoff.
double first_shell_radius(const std::function<double(double)>& rho, double a0, std::size_t N) {
    auto integrand = [&](double y) { return rho(y) * y * y; };
    const double total = integrate(integrand, 0.0, a0, 1e-12);
    const double target = total / static_cast<double>(N);
    double lo = 0.0, hi = a0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * a0; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integrate(integrand, 0.0, mid, 1e-13 * std::max(total, 1e-300)) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

InitialData build_initial_data(RunConfig& cfg) {
    InitialData base;
    if (cfg.initial == "lane-emden") {
        LaneEmdenProfile profile = solve_lane_emden(cfg.gas.gamma);
        rescale_profile(profile, cfg.rho_c, cfg.gas);
        double eps = cfg.solver.eps_radius;
        if (eps < 0.0) {
            auto rho_full = [&](double r) {
                return cfg.rho_c * std::pow(profile.theta_at(r / profile.length_scale), profile.n);
            };
            eps = 0.5 * first_shell_radius(rho_full, profile.physical_radius, cfg.solver.N);
        }
        base = hydrostatic_initial_data(profile, cfg.rho_c, eps, cfg.gas, cfg.truncation_floor,
                                        cfg.target_mass);
    } else if (cfg.initial == "uniform") {
        double eps = cfg.solver.eps_radius;
        if (eps < 0.0)
            eps = 0.5 * cfg.a0 / std::cbrt(static_cast<double>(cfg.solver.N));
        base = uniform_initial_data(cfg.uniform_rho, cfg.a0, eps, cfg.gas);
        if (cfg.target_mass > 0.0)
            throw domain_error("config: target_mass applies to lane-emden data; "
                               "set uniform_rho instead");
    } else if (cfg.initial == "file") {
        base = file_initial_data(cfg);
        if (cfg.solver.eps_radius >= 0.0 && cfg.solver.eps_radius != base.eps)
            throw domain_error("config: eps_radius must match the file's first radius");
    } else {
        throw domain_error("config: bad initial-data selector '" + cfg.initial + "'");
    }
    cfg.solver.eps_radius = base.eps;
    if (cfg.perturb_amplitude != 0.0)
        base = perturbed_initial_data(base, cfg.perturb_amplitude, cfg.perturb_mode);
    return base;
}

} // namespace nsp
