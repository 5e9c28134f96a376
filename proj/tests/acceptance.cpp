// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] must point at the CLI binary (used by the determinism
// criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsp/csv.hpp"
#include "nsp/diagnostics.hpp"
#include "nsp/mass_bounds.hpp"
#include "nsp/solver.hpp"
#include "nsp/stationary.hpp"

using namespace nsp;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

struct Outcome {
    int id;
    std::string title;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Outcome> g_outcomes;

void record(int id, const std::string& title, bool pass, const std::string& detail,
            clk::time_point t0) {
    const double secs = std::chrono::duration<double>(clk::now() - t0).count();
    g_outcomes.push_back({id, title, pass, detail, secs});
    std::printf("[%s] criterion %2d: %-32s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
                title.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double v) { return format_double(v); }

GasModel base_model(double mu) {
    GasModel m;
    m.gamma = 4.0 / 3.0;
    m.kappa = 1.0;
    m.mu = mu;
    m.lambda = 0.0;
    return m;
}

// ---------------------------------------------------------------------------

void criterion_1_algebra() {
    const auto t0 = clk::now();
    std::mt19937 gen(42u);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    };
    bool ok = true;
    std::string why;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const double g = uni(1.21, 1.331);
        const double M = std::exp(uni(std::log(0.2), std::log(5.0)));
        const double B = std::exp(uni(std::log(0.3), std::log(5.0)));
        const double E0 = std::exp(uni(std::log(0.2), std::log(5.0)));

        if (f_of_s(0.0, g, M, B) != 0.0) { ok = false; why = "f(0) != 0"; }
        const double sst = s_star(g, M, B);
        const double h = 1e-6 * sst;
        const double fd = (f_of_s(sst + h, g, M, B) - f_of_s(sst - h, g, M, B)) / (2.0 * h);
        if (std::abs(fd) > 1e-8 / (g - 1.0)) { ok = false; why = "f'(s*) too large"; }
        const double closed = f_at_s_star(g, M, B);
        if (std::abs(f_of_s(sst, g, M, B) - closed) > 1e-10 * std::abs(closed)) {
            ok = false;
            why = "f(s*) closed form mismatch";
        }
        const double Mc = critical_mass(g, E0, B);
        if (std::abs(f_at_s_star(g, Mc, B) - E0) > 1e-10 * E0) {
            ok = false;
            why = "f(s*(M_c)) != E0";
        }
        if (!(m_bar(g, E0, B, 2.0) < Mc)) { ok = false; why = "M_bar >= M_c"; }
    }
    const bool worked = std::abs(s_star(1.25, 1.0, 1.0) - 27.0) < 1e-12 * 27.0 &&
                        std::abs(f_of_s(27.0, 1.25, 1.0, 1.0) - 27.0) < 1e-12 * 27.0;
    if (!worked) { ok = false; why = "worked case gamma=5/4 failed"; }
    record(1, "closed-form algebra sweep", ok,
           ok ? "100 random tuples + worked case" : why, t0);
}

void criterion_2_lane_emden() {
    const auto t0 = clk::now();
    bool ok = true;
    std::string why;

    const LaneEmdenProfile p5 = solve_lane_emden(1.2, 1e-10, 20.0001);
    double worst5 = 0.0;
    for (double xi = 0.0; xi <= 20.0; xi += 0.005)
        worst5 = std::max(worst5,
                          std::abs(p5.theta_at(xi) - 1.0 / std::sqrt(1.0 + xi * xi / 3.0)));
    if (worst5 > 1e-8) { ok = false; why = "n=5 closed form, err " + fmt(worst5); }

    const LaneEmdenProfile p1 = solve_lane_emden(2.0, 1e-12, 6.0);
    if (std::abs(p1.xi1 - kPi) > 1e-8) { ok = false; why = "n=1 zero vs pi"; }

    const LaneEmdenProfile p3 = solve_lane_emden(4.0 / 3.0, 1e-10, 8.0);
    const double oracle = 6.896848619373811; // pre-built adaptive oracle
    if (std::abs(p3.xi1 - oracle) / oracle > 1e-6) { ok = false; why = "n=3 zero vs oracle"; }

    record(2, "Lane-Emden oracle equivalence", ok,
           ok ? "n=5 sup err " + fmt(worst5) + ", n=1 |xi1-pi| " + fmt(std::abs(p1.xi1 - kPi)) +
                    ", n=3 rel " + fmt(std::abs(p3.xi1 - oracle) / oracle)
              : why,
           t0);
}

void criterion_3_conservation() {
    const auto t0 = clk::now();
    GasModel m = base_model(1.0);
    const double B = constant_B(m.gamma, 1.0);
    const double Mc = critical_mass(m.gamma, 1.0, B);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 8.0);
    InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.5 * Mc);
    d = perturbed_initial_data(d, 0.05);

    SolverConfig cfg;
    cfg.N = 200;
    cfg.t_end = 1e9; // stepping manually
    cfg.output_interval = 1.0;
    LagrangianState s = eulerian_to_lagrangian(d, cfg.N);
    const std::vector<double> x0 = s.x;
    const double M0 = s.total_mass();

    double worst_geo = 0.0, worst_mass = 0.0;
    bool cells_exact = true;
    for (int k = 0; k < 1000; ++k) {
        step(s, m, cfg);
        worst_geo = std::max(worst_geo, s.max_geometry_residual());
        worst_mass = std::max(worst_mass, std::abs(s.total_mass() / M0 - 1.0));
        if (s.x != x0) cells_exact = false;
    }
    const bool ok = cells_exact && worst_geo <= 1e-12 && worst_mass <= 1e-10;
    record(3, "conservation and geometry", ok,
           "geo " + fmt(worst_geo) + ", mass drift " + fmt(worst_mass) +
               (cells_exact ? ", cell masses exact" : ", CELL MASSES CHANGED"),
           t0);
}

struct Run4 {
    TimeSeries series;
    double E0 = 0.0;
    double C_gamma = 0.0;
    double M = 0.0;
};

Run4 g_run4;

double coercive_margin(const TimeSeries& s, double E0, double C_gamma) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : s.records) {
        const double lhs = r.E_kin + C_gamma * r.pressure_integral + r.dissipation_cum;
        worst = std::max(worst, lhs / E0 - 1.0);
    }
    return worst;
}

void criterion_4_energy_inequality() {
    const auto t0 = clk::now();
    GasModel m = base_model(1.0);
    const double B = constant_B(m.gamma, 1.0);
    const double Mc = critical_mass(m.gamma, 1.0, B);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 8.0);
    InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.5 * Mc);
    d = perturbed_initial_data(d, 0.02);
    const double C_gamma = coercivity_constant(m.gamma, d.M, B);

    SolverConfig cfg;
    cfg.N = 400;
    cfg.t_end = 5.0;
    cfg.output_interval = 0.25;
    cfg.dt_max = 2e-3;
    TimeSeries coarse = run(d, m, cfg);
    const double E0_coarse = coarse.records.front().E_kin + coarse.records.front().E_int;
    const double margin_coarse = coercive_margin(coarse, E0_coarse, C_gamma);

    SolverConfig fine = cfg;
    fine.N = 800;
    fine.dt_max = 1e-3;
    const TimeSeries refined = run(d, m, fine);
    const double E0_fine = refined.records.front().E_kin + refined.records.front().E_int;
    const double margin_fine = coercive_margin(refined, E0_fine, C_gamma);

    const double viol_coarse = std::max(margin_coarse, 0.0);
    const double viol_fine = std::max(margin_fine, 0.0);
    const bool held = margin_coarse <= 1e-2 && margin_fine <= 1e-2;
    const bool shrinks = viol_fine <= 0.5 * viol_coarse + 1e-14;
    record(4, "discrete energy inequality", held && shrinks,
           "margin N400 " + fmt(margin_coarse) + ", N800 " + fmt(margin_fine), t0);

    g_run4.series = std::move(coarse);
    g_run4.E0 = E0_coarse;
    g_run4.C_gamma = C_gamma;
    g_run4.M = d.M;
}

void criterion_5_hydrostatic() {
    const auto t0 = clk::now();
    GasModel m = base_model(1.0);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 8.0);
    std::vector<double> umax, logn;
    for (std::size_t N : {std::size_t(100), std::size_t(200), std::size_t(400)}) {
        const InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m);
        SolverConfig cfg;
        cfg.N = N;
        cfg.t_end = 1.0;
        cfg.output_interval = 0.5;
        const TimeSeries s = run(d, m, cfg);
        double worst = 0.0;
        for (double v : s.snapshots.back().u) worst = std::max(worst, std::abs(v));
        umax.push_back(worst);
        logn.push_back(std::log(static_cast<double>(N)));
    }
    // least-squares slope of log(umax) against log(N); first order needs <= -0.9
    const double n = 3.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        sx += logn[i];
        sy += std::log(umax[i]);
        sxx += logn[i] * logn[i];
        sxy += logn[i] * std::log(umax[i]);
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    record(5, "hydrostatic fidelity", slope <= -0.9,
           "max|u|(t=1): " + fmt(umax[0]) + " / " + fmt(umax[1]) + " / " + fmt(umax[2]) +
               ", order " + fmt(-slope),
           t0);
}

void criterion_6_transport_envelope() {
    const auto t0 = clk::now();
    const TimeSeries& s = g_run4.series;
    if (s.records.empty()) {
        record(6, "transport envelope", false, "run 4 unavailable", t0);
        return;
    }
    GasModel m = base_model(1.0);
    const LagrangianState& s0 = s.snapshots.front();
    const double T = s.records.back().t;
    const double rho0_max = *std::max_element(s0.rho.begin(), s0.rho.end());
    const double x_min = 0.2 * s0.x.back();

    long env_viol = 0, path_viol = 0, tracked = 0;
    std::vector<Envelope> env(s0.rho.size());
    std::vector<bool> track(s0.rho.size(), false);
    for (std::size_t j = 0; j < s0.rho.size(); ++j) {
        const double xc = 0.5 * (s0.x[j] + s0.x[j + 1]);
        if (xc < x_min) continue;
        track[j] = true;
        ++tracked;
        env[j] = transport_envelope(xc, T, m, g_run4.E0, g_run4.M, g_run4.C_gamma, s0.rho[j],
                                    rho0_max);
    }
    for (const auto& snap : s.snapshots) {
        for (std::size_t j = 0; j < snap.rho.size(); ++j) {
            if (!track[j]) continue;
            if (snap.rho[j] < env[j].lower * (1.0 - 1e-12) ||
                snap.rho[j] > env[j].upper * (1.0 + 1e-12))
                ++env_viol;
        }
        const PathBoundReport rep = path_lower_bounds(snap, m, g_run4.E0, g_run4.C_gamma);
        path_viol += rep.node_violations + rep.pair_violations;
    }
    record(6, "transport envelope + path bounds", env_viol == 0 && path_viol == 0,
           "tracked cells " + std::to_string(tracked) + ", envelope violations " +
               std::to_string(env_viol) + ", path violations " + std::to_string(path_viol),
           t0);
}

void criterion_7_y_positivity() {
    const auto t0 = clk::now();
    GasModel m = base_model(1.0);
    const double B = constant_B(m.gamma, 1.0);
    const double Mbar = m_bar(m.gamma, 1.0, B, 2.0);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 8.0);
    InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.6 * Mbar);
    d = perturbed_initial_data(d, 0.02);

    SolverConfig cfg;
    cfg.N = 200;
    cfg.t_end = 5.0;
    cfg.output_interval = 0.25;
    const TimeSeries s = run(d, m, cfg);
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : s.records) {
        const double w = 1.0 + r.t;
        const double floor = 0.95 * w * w * r.pressure_integral / (m.gamma - 1.0);
        if (!(r.Y > 0.0) || r.Y < floor) ok = false;
        worst = std::min(worst, r.Y - floor);
    }
    record(7, "Y positivity", ok, "min (Y - 0.95 floor) " + fmt(worst), t0);
}

void criterion_8_expansion_rate() {
    const auto t0 = clk::now();
    GasModel m = base_model(1e-5); // inertial regime: the rate is visible by t = 100
    const double B = constant_B(m.gamma, 1.0);
    const double Mc = critical_mass(m.gamma, 1.0, B);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 8.0);
    InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.5 * Mc);
    d = perturbed_initial_data(d, 0.02);

    SolverConfig cfg;
    cfg.N = 400;
    cfg.t_end = 100.0;
    cfg.output_interval = 0.5;
    const TimeSeries s = run(d, m, cfg);
    const ExpansionFit fit =
        fit_expansion(s.times(), s.running_max_radius(), 20.0, 100.0, m.gamma);

    double sup = 0.0, arg_t = 0.0;
    for (const auto& r : s.records) {
        const double q = (1.0 + r.t) * r.mean_pressure;
        if (q > sup) {
            sup = q;
            arg_t = r.t;
        }
    }
    const bool ok = fit.beta_hat >= 0.20 && std::isfinite(sup) && arg_t <= 50.0;
    record(8, "expansion-rate consistency", ok,
           "beta_hat " + fmt(fit.beta_hat) + " (paper 0.25), sup (1+t)<p> " + fmt(sup) +
               " at t " + fmt(arg_t),
           t0);
}

void criterion_9_viscous_decay() {
    const auto t0 = clk::now();
    GasModel m = base_model(1.0);
    m.gravity_enabled = false;
    m.kappa = 1e-4;
    const InitialData base = uniform_initial_data(1.0, 1.0, 0.05, m);
    const InitialData d = perturbed_initial_data(base, 0.3);
    SolverConfig cfg;
    cfg.N = 400;
    cfg.t_end = 1.0;
    cfg.output_interval = 0.05;
    cfg.viscous_theta = 0.5;
    cfg.dt_max = 5e-4;
    const TimeSeries s = run(d, m, cfg);
    const double E0 = s.records.front().E_kin + s.records.front().E_int;
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    double budget = 0.0;
    for (const auto& r : s.records) {
        if (r.E_kin > prev * (1.0 + 1e-12)) monotone = false;
        prev = r.E_kin;
        budget = std::max(budget, std::abs(r.E_kin + r.E_int + r.dissipation_cum - E0));
    }
    record(9, "gravity-off viscous decay", monotone && budget <= 1e-3 * E0,
           std::string(monotone ? "E_kin monotone" : "E_KIN NOT MONOTONE") + ", budget " +
               fmt(budget / E0) + " E0",
           t0);
}

void criterion_10_determinism(const std::string& cli) {
    const auto t0 = clk::now();
    const fs::path dir = fs::temp_directory_path() / "nsp_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    bool ok = true;
    std::string why = "byte-identical timeseries and snapshots";
    for (int i = 0; i < 2 && ok; ++i) {
        std::ofstream f(dir / "run.cfg");
        f << "gamma = 1.3333333333333333\nmu = 1\nlambda = 0\nN = 64\nt_end = 0.5\n"
          << "output_interval = 0.1\ninitial = lane-emden\nrho_c = 1\ntarget_mass = 1.5\n"
          << "perturb_amplitude = 0.1\neps_radius = 0.02\n"
          << "output_dir = " << (dir / ("out" + std::to_string(i))).string() << "\n";
        f.close();
        const std::string cmd = "\"" + cli + "\" simulate \"" + (dir / "run.cfg").string() +
                                "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            ok = false;
            why = "simulate invocation failed";
        }
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    if (ok) {
        const std::string a = slurp(dir / "out0" / "timeseries.csv");
        const std::string b = slurp(dir / "out1" / "timeseries.csv");
        if (a.empty() || a != b) {
            ok = false;
            why = "timeseries.csv differs";
        }
        if (slurp(dir / "out0" / "snapshots" / "snap_000000.csv") !=
            slurp(dir / "out1" / "snapshots" / "snap_000000.csv")) {
            ok = false;
            why = "snapshot differs";
        }
    }
    record(10, "determinism", ok, why, t0);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
        return 2;
    }
    criterion_1_algebra();
    criterion_2_lane_emden();
    criterion_3_conservation();
    criterion_4_energy_inequality();
    criterion_5_hydrostatic();
    criterion_6_transport_envelope();
    criterion_7_y_positivity();
    criterion_8_expansion_rate();
    criterion_9_viscous_decay();
    criterion_10_determinism(argv[1]);

    int failed = 0;
    for (const auto& o : g_outcomes)
        if (!o.pass) ++failed;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_outcomes.size()) - failed,
                g_outcomes.size());
    return failed == 0 ? 0 : 1;
}
