#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsp/config.hpp"
#include "nsp/csv.hpp"
#include "nsp/errors.hpp"
#include "nsp/mass_bounds.hpp"
#include "nsp/solver.hpp"
#include "nsp/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

void put_finite(json& j, const std::string& key, double v) {
    if (std::isfinite(v)) j[key] = v;
}

int cmd_simulate(const std::string& config_path) {
    nsp::RunConfig cfg = nsp::load_config(config_path);
    if (cfg.output_dir.empty())
        throw nsp::domain_error("config: key 'output_dir' required for simulate");
    const fs::path run_dir(cfg.output_dir);
    fs::create_directories(run_dir / "snapshots");

    nsp::InitialData data = nsp::build_initial_data(cfg);
    nsp::TimeSeries series = nsp::run(data, cfg.gas, cfg.solver);

    {
        std::ofstream f(run_dir / "config.txt", std::ios::binary);
        f << cfg.to_text();
    }
    nsp::write_timeseries_csv(run_dir / "timeseries.csv", series);
    for (std::size_t i = 0; i < series.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%06zu.csv", i);
        nsp::write_snapshot_csv(run_dir / "snapshots" / name, series.snapshots[i], cfg.gas);
    }

    json j;
    j["run_dir"] = run_dir.string();
    j["records"] = series.records.size();
    j["t_end"] = series.records.back().t;
    j["a_final"] = series.records.back().a;
    j["mass"] = series.records.back().mass;
    j["boundary_gap_max"] = series.boundary_gap_max;
    std::cout << j.dump() << "\n";
    return kExitOk;
}

int cmd_lane_emden(double gamma, double rho_c, const std::string& out_path, double xi_max,
                   double tol) {
    nsp::LaneEmdenProfile profile = nsp::solve_lane_emden(gamma, tol, xi_max);
    nsp::GasModel model;
    model.gamma = gamma;
    model.mu = 1.0;
    model.lambda = 0.0;
    nsp::rescale_profile(profile, rho_c, model);
    if (!out_path.empty()) nsp::write_profile_csv(out_path, profile);

    json j;
    j["gamma"] = gamma;
    j["n"] = profile.n;
    j["finite_support"] = profile.finite_support;
    put_finite(j, "xi1", profile.xi1);
    j["rho_c"] = rho_c;
    put_finite(j, "physical_radius", profile.physical_radius);
    j["physical_mass"] = profile.physical_mass;
    if (!out_path.empty()) j["profile_csv"] = out_path;
    std::cout << j.dump() << "\n";
    return kExitOk;
}

int cmd_critical_mass(double gamma, double e0, double a_gamma, double l, double alpha, double m) {
    const nsp::CriticalMassReport rep = nsp::make_report(gamma, m, e0, a_gamma, l, alpha);
    json j;
    j["gamma"] = rep.gamma;
    j["a_gamma"] = rep.a_gamma;
    j["b"] = rep.B;
    j["e0"] = rep.E0;
    j["m_c"] = rep.M_c;
    j["m_bar"] = rep.M_bar;
    j["l"] = rep.l;
    put_finite(j, "alpha", rep.alpha);
    put_finite(j, "m", rep.M);
    put_finite(j, "c_gamma", rep.C_gamma);
    put_finite(j, "s_star", rep.s_star);
    put_finite(j, "f_at_s_star", rep.f_at_s_star);
    if (!rep.verdict.empty()) j["verdict"] = rep.verdict;
    std::cout << j.dump() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& run_dir) {
    const auto verdicts = nsp::verify_run_dir(run_dir);
    json arr = json::array();
    for (const auto& v : verdicts) {
        json j;
        j["name"] = v.name;
        j["applicable"] = v.applicable;
        j["hard"] = v.hard;
        j["pass"] = v.pass;
        put_finite(j, "value", v.value);
        j["detail"] = v.detail;
        arr.push_back(std::move(j));
    }
    std::cout << arr.dump(2) << "\n";
    return nsp::all_hard_pass(verdicts) ? kExitOk : kExitVerification;
}

int cmd_fit_expansion(const std::string& run_dir, double t_lo, double t_hi) {
    const auto table = nsp::read_timeseries_csv(fs::path(run_dir) / "timeseries.csv");
    const nsp::RunConfig cfg = nsp::load_config(fs::path(run_dir) / "config.txt");
    const auto fit = nsp::fit_expansion(table.column("t"), table.column("a1"), t_lo, t_hi,
                                        cfg.gas.gamma);
    json j;
    j["t_lo"] = fit.t_lo;
    j["t_hi"] = fit.t_hi;
    j["beta_hat"] = fit.beta_hat;
    j["beta_paper"] = fit.beta_paper;
    j["residual_rms"] = fit.residual_rms;
    j["samples"] = fit.samples;
    std::cout << j.dump() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-boundary simulator and verifier for spherically symmetric "
                 "compressible Navier-Stokes-Poisson flow"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "integrate a configured run and write CSV outputs");
    sim->add_option("config", config_path, "flat key=value configuration file")->required();

    double le_gamma = 0.0, le_rho_c = 1.0, le_xi_max = 2000.0, le_tol = 1e-10;
    std::string le_out = "profile.csv";
    auto* le = app.add_subcommand("lane-emden", "solve the polytrope profile and report scales");
    le->add_option("--gamma", le_gamma, "adiabatic exponent in (1, 2]")->required();
    le->add_option("--rho-c", le_rho_c, "central density for the physical rescaling");
    le->add_option("--out", le_out, "profile CSV path (empty: skip writing)");
    le->add_option("--xi-max", le_xi_max, "integration cutoff");
    le->add_option("--tol", le_tol, "first-zero tolerance");

    double cm_gamma = 0.0, cm_e0 = 0.0, cm_a = 0.0, cm_l = 0.0, cm_alpha = 0.0;
    double cm_m = std::numeric_limits<double>::quiet_NaN();
    auto* cm = app.add_subcommand("critical-mass", "print the critical-mass report as JSON");
    cm->add_option("--gamma", cm_gamma)->required();
    cm->add_option("--e0", cm_e0)->required();
    cm->add_option("--a-gamma", cm_a)->required();
    cm->add_option("--l", cm_l, "threshold sharpening factor (> 1; 0 = auto)");
    cm->add_option("--alpha", cm_alpha, "concavity parameter (0 = auto)");
    cm->add_option("--m", cm_m, "total mass to classify");

    std::string verify_dir;
    auto* ver = app.add_subcommand("verify", "run the inequality suite over a run directory");
    ver->add_option("run_dir", verify_dir)->required();

    std::string fit_dir;
    double fit_lo = 0.0, fit_hi = 0.0;
    auto* fit = app.add_subcommand("fit-expansion", "fit the boundary expansion exponent");
    fit->add_option("run_dir", fit_dir)->required();
    fit->add_option("--t-lo", fit_lo)->required();
    fit->add_option("--t-hi", fit_hi)->required();

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(config_path);
        if (le->parsed()) return cmd_lane_emden(le_gamma, le_rho_c, le_out, le_xi_max, le_tol);
        if (cm->parsed()) return cmd_critical_mass(cm_gamma, cm_e0, cm_a, cm_l, cm_alpha, cm_m);
        if (ver->parsed()) return cmd_verify(verify_dir);
        if (fit->parsed()) return cmd_fit_expansion(fit_dir, fit_lo, fit_hi);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const nsp::numerical_error& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const nsp::domain_error& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
