#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsp/diagnostics.hpp"
#include "nsp/errors.hpp"
#include "nsp/mass_bounds.hpp"
#include "nsp/solver.hpp"
#include "test_util.hpp"

using namespace nsp;

// Transport-envelope constants for gamma=4/3, M=pi, E0=1, C_gamma=1, T=1,
// x=1, nu=100, |rho0|_inf=2, rho0(x)=1.5; frozen from a 50-digit evaluation.
static constexpr double kEnvC = 6.785398163397448;
static constexpr double kEnvLittleC = 9.543846200720943;
static constexpr double kEnvLower = 1.363461444579444;
static constexpr double kEnvUpper = 1.605313540343472;

namespace {

GasModel model43() {
    GasModel m;
    m.gamma = 4.0 / 3.0;
    m.kappa = 1.0;
    m.mu = 1.0;
    m.lambda = 0.0;
    return m;
}

LagrangianState wiggled_state(std::size_t N) {
    LagrangianState s = testutil::uniform_state(1.0, 0.1, 1.4, N);
    for (std::size_t j = 0; j < N; ++j) s.rho[j] *= 1.0 + 0.3 * std::sin(7.0 * s.x[j]);
    s.rebuild_radii_from_density();
    for (std::size_t i = 1; i <= N; ++i) s.u[i] = 0.2 * std::cos(3.0 * s.r[i]);
    return s;
}

} // namespace

TEST_CASE("energies vanish with the density") {
    GasModel m = model43();
    const LagrangianState s = testutil::uniform_state(1e-30, 0.0, 1.0, 32);
    CHECK(kinetic_energy(s) == 0.0);
    CHECK(internal_energy(s, m) < 1e-12);
    CHECK(gravitational_energy(s) < 1e-12);
}

TEST_CASE("uniform ball self-gravity: closed form and quadrature oracle") {
    const double rho = 1.7, R = 1.1;
    const LagrangianState s = testutil::uniform_state(rho, 0.0, R, 1000);
    const double exact = 4.0 * kPi * rho * rho * std::pow(R, 5.0) / 15.0;
    CHECK(gravitational_energy(s) == doctest::Approx(exact).epsilon(1e-8));
    const double oracle = 4.0 * kPi *
                          testutil::romberg(
                              [&](double r) { return rho * r * rho * r * r * r / 3.0; }, 0.0, R);
    CHECK(gravitational_energy(s) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("potential identity: both gravitational-energy routes agree") {
    for (std::size_t N : {std::size_t(64), std::size_t(400)}) {
        const LagrangianState s = wiggled_state(N);
        const double direct = gravitational_energy(s);
        const double via_potential = gravitational_energy_potential_route(s);
        CHECK(direct == doctest::Approx(via_potential).epsilon(1e-12));
    }
    // with an inner cutoff as well
    LagrangianState s = testutil::uniform_state(2.0, 0.2, 1.0, 128);
    CHECK(gravitational_energy(s) ==
          doctest::Approx(gravitational_energy_potential_route(s)).epsilon(1e-12));
}

TEST_CASE("H reduces to the three-term form at t = 0 with zero velocity") {
    GasModel m = model43();
    LagrangianState s = wiggled_state(128);
    for (auto& v : s.u) v = 0.0;
    double moment = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double rm = s.cell_r_mid(j);
        moment += rm * rm * s.cell_dx(j);
    }
    const double expected = moment +
                            2.0 / (m.gamma - 1.0) * pressure_integral(s, m) -
                            potential_integral(s);
    CHECK(H_functional(s, m, 0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("compact and expanded forms of H agree") {
    GasModel m = model43();
    for (double t : {0.0, 0.7, 3.0}) {
        const LagrangianState s = wiggled_state(200);
        const double w = 1.0 + t;
        double moment = 0.0, cross = 0.0, kin2 = 0.0;
        for (std::size_t j = 0; j < s.cells(); ++j) {
            const double rm = s.cell_r_mid(j);
            const double um = 0.5 * (s.u[j] + s.u[j + 1]);
            const double dx = s.cell_dx(j);
            moment += rm * rm * dx;
            cross += rm * um * dx;
            kin2 += um * um * dx;
        }
        const double expanded = moment - 2.0 * w * cross + w * w * kin2 +
                                2.0 / (m.gamma - 1.0) * w * w * pressure_integral(s, m) -
                                w * w * potential_integral(s);
        CHECK(H_functional(s, m, t) == doctest::Approx(expanded).epsilon(1e-10));
    }
}

TEST_CASE("Y subtracts the boundary monopole term") {
    GasModel m = model43();
    const LagrangianState s = wiggled_state(64);
    const double t = 1.3;
    const double m4pi = s.x.back();
    const double expected =
        H_functional(s, m, t) - 4.0 * kPi * m4pi * m4pi * (1.0 + t) * (1.0 + t) / s.a();
    CHECK(Y_functional(s, m, t) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("Y dominates the pressure term on strictly-subcritical data") {
    GasModel m = model43();
    const double B = constant_B(m.gamma, 1.0);
    const double Mbar = m_bar(m.gamma, 1.0, B, 2.0);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 10.0);
    const InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.5 * Mbar);
    const LagrangianState s = eulerian_to_lagrangian(d, 256);
    const double floor = pressure_integral(s, m) / (m.gamma - 1.0);
    CHECK(Y_functional(s, m, 0.0) > floor);
}

TEST_CASE("transport envelope: frozen high-precision case") {
    GasModel m = model43();
    m.mu = 50.0; // nu = 100
    const Envelope env = transport_envelope(1.0, 1.0, m, 1.0, kPi, 1.0, 1.5, 2.0);
    CHECK(env.C_xT == doctest::Approx(kEnvC).epsilon(1e-12));
    CHECK(env.c_xT == doctest::Approx(kEnvLittleC).epsilon(1e-12));
    CHECK(env.lower == doctest::Approx(kEnvLower).epsilon(1e-12));
    CHECK(env.upper == doctest::Approx(kEnvUpper).epsilon(1e-12));
}

TEST_CASE("transport envelope: limits and monotonicity") {
    GasModel m = model43();
    m.mu = 1e12; // nu -> infinity collapses the envelope onto rho0
    const Envelope tight = transport_envelope(0.5, 2.0, m, 1.0, 1.0, 1.0, 1.2, 2.0);
    CHECK(tight.lower == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(tight.upper == doctest::Approx(1.2).epsilon(1e-9));

    m.mu = 2.0;
    const Envelope base = transport_envelope(0.5, 2.0, m, 1.0, 1.0, 1.0, 1.2, 2.0);
    const Envelope longer = transport_envelope(0.5, 4.0, m, 1.0, 1.0, 1.0, 1.2, 2.0);
    CHECK(longer.upper >= base.upper);
    CHECK(longer.lower <= base.lower);
    const Envelope farther = transport_envelope(0.8, 2.0, m, 1.0, 1.0, 1.0, 1.2, 2.0);
    CHECK(farther.upper <= base.upper);
    CHECK(farther.lower >= base.lower);

    CHECK_THROWS_AS(transport_envelope(0.0, 1.0, m, 1.0, 1.0, 1.0, 1.0, 1.0), domain_error);
}

TEST_CASE("path lower bounds hold on a subcritical Lane-Emden grid") {
    GasModel m = model43();
    const double B = constant_B(m.gamma, 1.0);
    const double Mc = critical_mass(m.gamma, 1.0, B);
    const LaneEmdenProfile p = solve_lane_emden(m.gamma, 1e-10, 10.0);
    const InitialData d = hydrostatic_initial_data(p, 1.0, 0.02, m, 0.0, 0.5 * Mc);
    const LagrangianState s = eulerian_to_lagrangian(d, 400);
    const double C_gamma = coercivity_constant(m.gamma, d.M, B);
    REQUIRE(C_gamma > 0.0);
    const PathBoundReport rep = path_lower_bounds(s, m, d.E0, C_gamma);
    CHECK(rep.node_violations == 0);
    CHECK(rep.pair_violations == 0);
    CHECK(rep.nodes_checked == 401);
    CHECK(rep.pairs_checked > 100);
}

TEST_CASE("weighted pressure increment: vacuum and uniform closed forms") {
    GasModel m = model43();
    const LagrangianState vac = testutil::uniform_state(1e-30, 0.0, 1.0, 16);
    CHECK(weighted_pressure_increment(vac, m, 0.1) < 1e-60);

    const double rho = 1.3, eps = 0.2, a = 1.1, dt = 0.25;
    const LagrangianState s = testutil::uniform_state(rho, eps, a, 200);
    const double exact = dt * std::pow(rho, 2.0 * m.gamma) *
                         (std::pow(a, 13.0) - std::pow(eps, 13.0)) / 13.0;
    CHECK(weighted_pressure_increment(s, m, dt) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("dissipation rate matches the Eulerian integrand on a smooth state") {
    GasModel m = model43();
    auto rho = [](double r) { return 1.0 + 0.4 * std::cos(2.0 * r); };
    auto u = [](double r) { return 0.3 * (r - 0.4) * (2.0 - r); };
    auto du = [](double r) { return 0.3 * (2.4 - 2.0 * r); };
    const InitialData d =
        testutil::manual_initial_data(rho, u, du, 0.4, 1.6, m);
    const double oracle = m.nu() * testutil::romberg(
                                       [&](double r) {
                                           const double div = du(r) + 2.0 * u(r) / r;
                                           return div * div * r * r;
                                       },
                                       0.4, 1.6);
    const double d512 =
        std::abs(dissipation_rate(eulerian_to_lagrangian(d, 512), m) - oracle);
    const double d1024 =
        std::abs(dissipation_rate(eulerian_to_lagrangian(d, 1024), m) - oracle);
    CHECK(d512 / oracle < 1e-4);
    CHECK(d1024 < d512 / 2.5);
}

TEST_CASE("expansion fit: exact power law, constant series, window guard") {
    std::vector<double> t, a;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.5 * i);
        a.push_back(std::pow(1.0 + t.back(), 0.25));
    }
    const ExpansionFit fit = fit_expansion(t, a, 10.0, 100.0, 4.0 / 3.0);
    CHECK(fit.beta_hat == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(fit.beta_paper == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(fit.residual_rms < 1e-12);

    std::vector<double> a_const(t.size(), 2.5);
    CHECK(fit_expansion(t, a_const, 10.0, 100.0, 4.0 / 3.0).beta_hat ==
          doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_expansion(t, a, 10.0, 11.0, 4.0 / 3.0), domain_error);
}

TEST_CASE("record assembly fills the cumulative and instantaneous fields") {
    GasModel m = model43();
    const LagrangianState s = wiggled_state(64);
    const DiagnosticsRecord rec = make_record(s, m, 2.0, 0.125, 0.5, 1.7);
    CHECK(rec.t == 2.0);
    CHECK(rec.dissipation_cum == 0.125);
    CHECK(rec.weighted_pressure_cum == 0.5);
    CHECK(rec.a1 == 1.7);
    CHECK(rec.E_total ==
          doctest::Approx(rec.E_kin + rec.E_int - rec.E_grav).epsilon(1e-14));
    CHECK(rec.mean_pressure ==
          doctest::Approx(rec.pressure_integral / std::pow(rec.a, 3.0)).epsilon(1e-13));
    CHECK(rec.E_kin >= 0.0);
    CHECK(rec.E_int >= 0.0);
    CHECK(rec.E_grav >= 0.0);
}
