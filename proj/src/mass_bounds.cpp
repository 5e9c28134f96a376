#include "nsp/mass_bounds.hpp"

#include <cmath>
#include <limits>

#include "nsp/errors.hpp"
#include "nsp/solver.hpp"

namespace nsp {

namespace {

constexpr double kGammaLo = 6.0 / 5.0;
constexpr double kGammaHi = 4.0 / 3.0;

bool is_four_thirds(double gamma) {
    // 4/3 is not representable, and configs routinely carry it truncated to
    // ten or so digits; anything this close means the critical exponent.
    return std::abs(gamma - kGammaHi) <= 1e-9;
}

void require_gamma_closed(double gamma) {
    if (!(gamma > kGammaLo) || (gamma > kGammaHi && !is_four_thirds(gamma)))
        throw domain_error("mass_bounds: gamma must lie in (6/5, 4/3]");
}

void require_gamma_open(double gamma) {
    if (!(gamma > kGammaLo) || !(gamma < kGammaHi) || is_four_thirds(gamma))
        throw domain_error("mass_bounds: gamma must lie in (6/5, 4/3)");
}

} // namespace

bool gamma_is_four_thirds(double gamma) { return is_four_thirds(gamma); }

double constant_B(double gamma, double A_gamma) {
    require_gamma_closed(gamma);
    if (!(A_gamma >= 0.0))
        throw domain_error("constant_B: A_gamma must be nonnegative");
    const double four_pi = 4.0 * kPi;
    const double e = 1.0 / (3.0 * (gamma - 1.0));
    return std::pow(four_pi, e) *
           (std::pow(four_pi, -2.0 / 3.0) / (2.0 * std::cbrt(3.0)) + A_gamma / (8.0 * kPi));
}

double f_of_s(double s, double gamma, double M, double B) {
    require_gamma_open(gamma);
    if (s < 0.0)
        throw domain_error("f_of_s: s must be nonnegative");
    if (s == 0.0) return 0.0;
    const double g1 = gamma - 1.0;
    return s / g1 - B * std::pow(M, (5.0 * gamma - 6.0) / (3.0 * g1)) * std::pow(s, 1.0 / (3.0 * g1));
}

double f_prime(double s, double gamma, double M, double B) {
    require_gamma_open(gamma);
    if (!(s > 0.0))
        throw domain_error("f_prime: s must be positive");
    const double g1 = gamma - 1.0;
    return 1.0 / g1 - B / (3.0 * g1) * std::pow(M, (5.0 * gamma - 6.0) / (3.0 * g1)) *
                          std::pow(s, (4.0 - 3.0 * gamma) / (3.0 * g1));
}

double s_star(double gamma, double M, double B) {
    require_gamma_open(gamma);
    if (!(M > 0.0) || !(B > 0.0))
        throw domain_error("s_star: M and B must be positive");
    const double g1 = gamma - 1.0;
    const double q = 4.0 - 3.0 * gamma;
    return std::pow(B / 3.0, -3.0 * g1 / q) * std::pow(M, -(5.0 * gamma - 6.0) / q);
}

double f_at_s_star(double gamma, double M, double B) {
    require_gamma_open(gamma);
    const double g1 = gamma - 1.0;
    const double q = 4.0 - 3.0 * gamma;
    return q / g1 * std::pow(B / 3.0, -3.0 * g1 / q) * std::pow(M, -(5.0 * gamma - 6.0) / q);
}

double critical_mass(double gamma, double E0, double B) {
    require_gamma_closed(gamma);
    if (!(E0 > 0.0) || !(B > 0.0))
        throw domain_error("critical_mass: E0 and B must be positive");
    if (is_four_thirds(gamma)) return std::pow(3.0 / B, 1.5);
    const double g1 = gamma - 1.0;
    const double q = 4.0 - 3.0 * gamma;
    const double p = 5.0 * gamma - 6.0;
    const double core = q / g1 * std::pow(B / 3.0, -3.0 * g1 / q);
    return std::pow(core, q / p) * std::pow(E0, -q / p);
}

double m_bar(double gamma, double E0, double B, double l) {
    require_gamma_closed(gamma);
    if (!(l > 1.0))
        throw domain_error("m_bar: l must exceed 1");
    if (!(E0 > 0.0) || !(B > 0.0))
        throw domain_error("m_bar: E0 and B must be positive");
    if (is_four_thirds(gamma)) return std::pow(3.0 / (2.0 * B), 1.5);
    return critical_mass(gamma, l * E0, B);
}

double coercivity_constant(double gamma, double M, double B) {
    require_gamma_closed(gamma);
    if (is_four_thirds(gamma)) return 3.0 - B * std::pow(M, 2.0 / 3.0);
    return (4.0 - 3.0 * gamma) / (gamma - 1.0);
}

double largest_admissible_alpha(double gamma) {
    require_gamma_open(gamma);
    return std::pow(0.5, 3.0 * (gamma - 1.0) / (4.0 - 3.0 * gamma));
}

double min_feasible_l(double gamma) {
    return 1.0 / largest_admissible_alpha(gamma);
}

CriticalMassReport make_report(double gamma, double M, double E0, double A_gamma, double l,
                               double alpha) {
    require_gamma_closed(gamma);
    const bool g43 = is_four_thirds(gamma);
    CriticalMassReport rep;
    rep.gamma = gamma;
    rep.a_gamma = A_gamma;
    rep.E0 = E0;
    rep.M = M;
    rep.B = constant_B(gamma, A_gamma);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (g43) {
        rep.l = l > 0.0 ? l : 2.0;
        rep.alpha = nan; // the alpha device only enters the gamma < 4/3 branch
    } else {
        const double a_max = largest_admissible_alpha(gamma);
        rep.l = l > 0.0 ? l : std::max(2.0, 1.0 / a_max);
        rep.alpha = alpha > 0.0 ? alpha : a_max;
        if (!(rep.l > 1.0))
            throw domain_error("make_report: l must exceed 1");
        if (!(rep.alpha > 0.0 && rep.alpha < 1.0))
            throw domain_error("make_report: alpha must lie in (0, 1)");
        if (rep.alpha > a_max * (1.0 + 1e-12))
            throw domain_error("make_report: alpha violates alpha^{(4-3g)/(3(g-1))} <= 1/2");
        if (rep.alpha * rep.l < 1.0 - 1e-12)
            throw domain_error("make_report: alpha*l >= 1 violated; increase l");
    }

    rep.M_c = critical_mass(gamma, E0, rep.B);
    rep.M_bar = m_bar(gamma, E0, rep.B, rep.l);

    if (std::isnan(M)) {
        rep.C_gamma = g43 ? nan : coercivity_constant(gamma, nan, rep.B);
        rep.s_star = nan;
        rep.f_at_s_star = nan;
    } else {
        rep.C_gamma = coercivity_constant(gamma, M, rep.B);
        if (g43) {
            rep.s_star = nan;
            rep.f_at_s_star = nan;
        } else {
            rep.s_star = s_star(gamma, M, rep.B);
            rep.f_at_s_star = f_at_s_star(gamma, M, rep.B);
        }
        if (M < rep.M_bar)
            rep.verdict = "strictly-subcritical";
        else if (M < rep.M_c)
            rep.verdict = "subcritical";
        else
            rep.verdict = "supercritical";
    }
    return rep;
}

PartitionReport energy_partition_check(const LagrangianState& state, const GasModel& model,
                                       double B) {
    PartitionReport rep;
    rep.pressure_integral = pressure_integral(state, model);
    rep.gravitational_integral = gravitational_energy(state);
    const double g = model.gamma;
    rep.internal = rep.pressure_integral / (g - 1.0);
    rep.C_gamma = coercivity_constant(g, state.total_mass(), B);
    const double lhs = rep.internal - rep.gravitational_integral;
    rep.subcritical_bound_holds = lhs >= rep.C_gamma * rep.pressure_integral - 1e-14;
    rep.strict_bound_holds = lhs >= rep.pressure_integral / (2.0 * (g - 1.0)) - 1e-14;
    return rep;
}

PartitionReport energy_partition_check(const InitialData& data, const GasModel& model, double B,
                                       std::size_t N) {
    return energy_partition_check(eulerian_to_lagrangian(data, N), model, B);
}

} // namespace nsp
