#include "nsp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsp/config.hpp"
#include "nsp/csv.hpp"
#include "nsp/diagnostics.hpp"
#include "nsp/errors.hpp"
#include "nsp/mass_bounds.hpp"

namespace nsp {

namespace {

std::vector<SnapshotData> load_snapshots(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<SnapshotData> snaps;
    snaps.reserve(files.size());
    for (const auto& f : files) snaps.push_back(read_snapshot_csv(f));
    return snaps;
}

std::string fmt(double v) { return format_double(v); }

} // namespace

std::vector<Verdict> verify_run_dir(const std::filesystem::path& run_dir) {
    RunConfig cfg = load_config(run_dir / "config.txt");
    TimeSeriesTable ts = read_timeseries_csv(run_dir / "timeseries.csv");
    std::vector<SnapshotData> snaps = load_snapshots(run_dir / "snapshots");
    if (ts.rows.empty()) throw domain_error("verify: empty time series");
    if (snaps.empty()) throw domain_error("verify: no snapshots");

    const auto t = ts.column("t");
    const auto a = ts.column("a");
    const auto a1 = ts.column("a1");
    const auto mass = ts.column("mass");
    const auto e_kin = ts.column("E_kin");
    const auto e_int = ts.column("E_int");
    const auto diss = ts.column("dissipation_cum");
    const auto y_col = ts.column("Y");
    const auto mean_p = ts.column("mean_pressure");
    const std::size_t n = t.size();

    const double gamma = cfg.gas.gamma;
    const double g1 = gamma - 1.0;
    const double kappa = cfg.gas.kappa;
    const double M = mass.front();
    const double E0 = e_kin.front() + e_int.front();
    const double B = constant_B(gamma, cfg.a_gamma);
    const double M_c = cfg.gas.gravity_enabled ? critical_mass(gamma, E0, B) : 0.0;
    const double l_eff = cfg.l > 0.0 ? cfg.l
                         : (gamma_is_four_thirds(gamma) ? 2.0
                                                        : std::max(2.0, min_feasible_l(gamma)));
    const double M_bar = cfg.gas.gravity_enabled ? m_bar(gamma, E0, B, l_eff) : 0.0;
    const double C_gamma = coercivity_constant(gamma, M, B);
    const bool paper_units = kappa == 1.0;
    const bool grav = cfg.gas.gravity_enabled;

    std::vector<Verdict> out;
    auto add = [&](Verdict v) { out.push_back(std::move(v)); };

    // Mass conservation
    {
        double worst = 0.0;
        for (double m : mass) worst = std::max(worst, std::abs(m / M - 1.0));
        add({"mass_conservation", true, true, worst <= 1e-10, worst,
             "max relative mass drift, tol 1e-10"});
    }

    // Discrete volume identity on every snapshot
    {
        double worst = 0.0;
        for (const auto& s : snaps) worst = std::max(worst, s.state.max_geometry_residual());
        add({"geometry_identity", true, true, worst <= 1e-12, worst,
             "max |rho dV / (3 dx) - 1| over snapshots, tol 1e-12"});
    }

    // Dissipation monotone
    {
        double worst = 0.0;
        for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, diss[i - 1] - diss[i]);
        const double tol = 1e-15 * std::max(1.0, diss.back());
        add({"dissipation_monotone", true, true, worst <= tol, worst,
             "max decrease of the cumulative dissipation"});
    }

    // a1 is the running max of a
    {
        double worst = 0.0;
        double run_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            run_max = std::max(run_max, a[i]);
            worst = std::max(worst, std::abs(a1[i] - run_max));
        }
        const double tol = 1e-12 * a1.back();
        add({"a1_running_max", true, true, worst <= tol, worst, "max |a1 - running max a|"});
    }

    // Energy inequality with the coercive constant (M < M_c branch)
    {
        const bool applicable = grav && paper_units && M < M_c && C_gamma > 0.0;
        double worst = -std::numeric_limits<double>::infinity();
        if (applicable) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p_int = mean_p[i] * a[i] * a[i] * a[i];
                const double lhs = e_kin[i] + C_gamma * p_int + diss[i];
                worst = std::max(worst, lhs / E0 - 1.0);
            }
        }
        add({"energy_inequality_coercive", applicable, true, !applicable || worst <= 1e-2, worst,
             "max (E_kin + C_gamma*int rho^gamma + dissipation)/E0 - 1, tol 1e-2"});
    }

    // Strict energy inequality (M < M_bar branch)
    {
        const bool applicable = grav && paper_units && M < M_bar;
        double worst = -std::numeric_limits<double>::infinity();
        if (applicable) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p_int = mean_p[i] * a[i] * a[i] * a[i];
                const double lhs = e_kin[i] + p_int / (2.0 * g1) + diss[i];
                worst = std::max(worst, lhs / E0 - 1.0);
            }
        }
        add({"energy_inequality_strict", applicable, true, !applicable || worst <= 1e-2, worst,
             "max (E_kin + int rho^gamma/(2(gamma-1)) + dissipation)/E0 - 1, tol 1e-2"});
    }

    // Gravity-off budget: kinetic + internal + dissipation conserved
    {
        const bool applicable = !grav;
        double worst = 0.0;
        if (applicable) {
            const double ref = e_kin.front() + e_int.front();
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(e_kin[i] + e_int[i] + diss[i] - ref) / ref);
        }
        add({"energy_budget_no_gravity", applicable, true, !applicable || worst <= 1e-2, worst,
             "max |E_kin + E_int + dissipation - E0|/E0, tol 1e-2"});
    }

    // Y positivity with the quantitative floor
    {
        const bool applicable = grav && paper_units && M < M_bar;
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        if (applicable) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p_int = mean_p[i] * a[i] * a[i] * a[i];
                const double w = 1.0 + t[i];
                const double floor = 0.95 * w * w * p_int / g1;
                if (!(y_col[i] > 0.0) || y_col[i] < floor) ok = false;
                worst = std::min(worst, y_col[i] - floor);
            }
        }
        add({"y_positivity", applicable, true, !applicable || ok, applicable ? worst : 0.0,
             "min Y - 0.95 (1+t)^2 int rho^gamma/(gamma-1)"});
    }

    // Transport envelope and path bounds over snapshots
    {
        const bool applicable = paper_units && C_gamma > 0.0 && (!grav || M < M_c);
        long env_viol = 0;
        long path_viol = 0;
        long checked = 0;
        if (applicable) {
            const double T = t.back();
            const auto& s0 = snaps.front().state;
            const double rho0_max = *std::max_element(s0.rho.begin(), s0.rho.end());
            const double x_min = 0.2 * s0.x.back();
            const std::size_t nc = s0.rho.size();
            std::vector<Envelope> env(nc);
            std::vector<bool> tracked(nc, false);
            for (std::size_t j = 0; j < nc; ++j) {
                const double xc = 0.5 * (s0.x[j] + s0.x[j + 1]);
                if (xc < x_min) continue;
                tracked[j] = true;
                env[j] = transport_envelope(xc, T, cfg.gas, E0, M, C_gamma, s0.rho[j], rho0_max);
            }
            for (const auto& snap : snaps) {
                for (std::size_t j = 0; j < nc; ++j) {
                    if (!tracked[j]) continue;
                    ++checked;
                    const double rho = snap.state.rho[j];
                    if (rho < env[j].lower * (1.0 - 1e-12) || rho > env[j].upper * (1.0 + 1e-12))
                        ++env_viol;
                }
                const auto rep = path_lower_bounds(snap.state, cfg.gas, E0, C_gamma);
                path_viol += rep.node_violations + rep.pair_violations;
            }
        }
        add({"transport_envelope", applicable, true, env_viol == 0,
             static_cast<double>(env_viol),
             "envelope violations over " + std::to_string(checked) + " tracked samples"});
        add({"path_lower_bounds", applicable, true, path_viol == 0,
             static_cast<double>(path_viol), "node and shell-separation bound violations"});
    }

    // Weighted pressure integral stays finite
    {
        double acc = 0.0;
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            const double dt = snaps[i].t - snaps[i - 1].t;
            acc += weighted_pressure_increment(snaps[i].state, cfg.gas, dt);
        }
        add({"weighted_pressure_finite", true, true, std::isfinite(acc), acc,
             "time integral of rho^{2 gamma} r^{12} (snapshot rectangle rule)"});
    }

    // Compensated mean pressure (constants unspecified: reported, not gated)
    {
        double sup = 0.0;
        double arg_t = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p_int = mean_p[i] * a[i] * a[i] * a[i];
            const double q = std::pow(1.0 + t[i], 6.0 * gamma - 7.0) * p_int /
                             (a1[i] * a1[i] * a1[i]);
            if (q > sup) {
                sup = q;
                arg_t = t[i];
            }
        }
        std::ostringstream detail;
        detail << "sup (1+t)^{6g-7} (1/a1^3) int rho^gamma, attained at t = " << fmt(arg_t);
        add({"compensated_mean_pressure", grav, false, true, sup, detail.str()});
    }

    // Expansion fit (informational; the paper rates are asymptotic lower bounds)
    {
        Verdict v{"expansion_fit", grav, false, true, 0.0, ""};
        const double t_lo = t.back() * 0.2;
        try {
            const auto fit = fit_expansion(t, a1, t_lo, t.back(), gamma);
            v.value = fit.beta_hat;
            std::ostringstream detail;
            detail << "beta_hat over [" << fmt(t_lo) << ", " << fmt(t.back())
                   << "], paper exponent " << fmt(fit.beta_paper);
            v.detail = detail.str();
        } catch (const domain_error&) {
            v.applicable = false;
            v.detail = "window too short for a fit";
        }
        add(std::move(v));
    }

    return out;
}

bool all_hard_pass(const std::vector<Verdict>& verdicts) {
    for (const auto& v : verdicts)
        if (v.hard && v.applicable && !v.pass) return false;
    return true;
}

} // namespace nsp
