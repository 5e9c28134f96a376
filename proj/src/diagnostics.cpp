#include "nsp/diagnostics.hpp"

#include <cmath>

#include "nsp/errors.hpp"

namespace nsp {

namespace {

// Integrals of the form  integral g(x, r) dx  are evaluated per cell with the
// substitution w = r^3, which is linear in x for piecewise-constant density:
// x = A_j + q_j w with q_j = rho_j / 3 and A_j = x_j - q_j w_j. Powers of r
// then integrate in closed form, so geometry-only functionals are exact for
// the discrete state.

inline double pow_int(double v, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= v;
    return out;
}

} // namespace

double kinetic_energy(const LagrangianState& s) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double um = 0.5 * (s.u[j] + s.u[j + 1]);
        sum += 0.5 * um * um * s.cell_dx(j);
    }
    return sum;
}

double pressure_integral(const LagrangianState& s, const GasModel& model) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j)
        sum += std::pow(s.rho[j], model.gamma - 1.0) * s.cell_dx(j);
    return sum;
}

double internal_energy(const LagrangianState& s, const GasModel& model) {
    return model.kappa / (model.gamma - 1.0) * pressure_integral(s, model);
}

double gravitational_energy(const LagrangianState& s) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double rj = s.r[j], rj1 = s.r[j + 1];
        const double q = s.rho[j] / 3.0;
        const double A = s.x[j] - q * rj * rj * rj;
        sum += q * (A * 1.5 * (rj1 * rj1 - rj * rj) +
                    q * 0.6 * (pow_int(rj1, 5) - pow_int(rj, 5)));
    }
    return 4.0 * kPi * sum;
}

double potential_integral(const LagrangianState& s) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double rj = s.r[j], rj1 = s.r[j + 1];
        const double q = s.rho[j] / 3.0;
        const double r5 = pow_int(rj1, 5) - pow_int(rj, 5);
        if (rj == 0.0) {
            // center cell with eps = 0: x_j = 0 exactly, so only the q^2 term
            sum += q * q * r5 / 5.0;
            continue;
        }
        const double A = s.x[j] - q * rj * rj * rj;
        sum += A * A * (1.0 / rj - 1.0 / rj1) + A * q * (rj1 * rj1 - rj * rj) + q * q * r5 / 5.0;
    }
    return 4.0 * kPi * sum;
}

double gravitational_energy_potential_route(const LagrangianState& s) {
    const double m4pi = s.x.back();
    return 0.5 * potential_integral(s) + 2.0 * kPi / s.a() * m4pi * m4pi;
}

double dissipation_rate(const LagrangianState& s, const GasModel& model) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double flux_lo = s.u[j] * s.r[j] * s.r[j];
        const double flux_hi = s.u[j + 1] * s.r[j + 1] * s.r[j + 1];
        const double div_u = (flux_hi - flux_lo) / s.cell_dx(j);
        sum += s.rho[j] * div_u * div_u * s.cell_dx(j);
    }
    return model.nu() * sum;
}

double H_functional(const LagrangianState& s, const GasModel& model, double t) {
    const double w = 1.0 + t;
    double drift = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double um = 0.5 * (s.u[j] + s.u[j + 1]);
        const double rm = s.cell_r_mid(j);
        const double d = rm - w * um;
        drift += d * d * s.cell_dx(j);
    }
    return drift + 2.0 * model.kappa / (model.gamma - 1.0) * w * w * pressure_integral(s, model) -
           w * w * potential_integral(s);
}

double Y_functional(const LagrangianState& s, const GasModel& model, double t) {
    const double w = 1.0 + t;
    const double m4pi = s.x.back();
    return H_functional(s, model, t) - 4.0 * kPi * m4pi * m4pi * w * w / s.a();
}

DiagnosticsRecord make_record(const LagrangianState& s, const GasModel& model, double t,
                              double dissipation_cum, double weighted_pressure_cum, double a1) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.mass = s.total_mass();
    rec.E_kin = kinetic_energy(s);
    rec.E_int = internal_energy(s, model);
    rec.E_grav = model.gravity_enabled ? gravitational_energy(s) : 0.0;
    rec.E_total = rec.E_kin + rec.E_int - rec.E_grav;
    rec.dissipation_cum = dissipation_cum;
    rec.H = H_functional(s, model, t);
    rec.Y = Y_functional(s, model, t);
    rec.a = s.a();
    rec.a1 = a1;
    rec.pressure_integral = pressure_integral(s, model);
    rec.mean_pressure = rec.pressure_integral / (rec.a * rec.a * rec.a);
    rec.weighted_pressure_cum = weighted_pressure_cum;
    rec.stress_last_cell = std::abs(stress(s, model).F.back());
    rec.boundary_gap = std::abs(s.r.back() - s.a_ode);
    return rec;
}

Envelope transport_envelope(double x_node, double T, const GasModel& model, double E0, double M,
                            double C_gamma, double rho0_at_node, double rho0_max) {
    if (!(x_node > 0.0))
        throw domain_error("transport_envelope: x must be positive (constants blow up at x = 0)");
    if (!(E0 > 0.0) || !(M > 0.0) || !(C_gamma > 0.0) || !(T >= 0.0))
        throw domain_error("transport_envelope: need E0, M, C_gamma > 0 and T >= 0");
    const double g = model.gamma;
    const double g1 = g - 1.0;
    const double nu = model.nu();

    const double c1 = 2.0 * std::pow(C_gamma, -2.0 / (3.0 * g1)) * std::sqrt(M / kPi) *
                      std::pow(E0, (3.0 * g + 1.0) / (6.0 * g1)) *
                      std::pow(x_node, -2.0 * g / (3.0 * g1));
    const double c2 =
        4.0 * T * std::pow(E0 / C_gamma, g / g1) * std::pow(x_node, -g / g1);
    const double c3 = M * M / (4.0 * kPi) * T * std::pow(E0 / C_gamma, 4.0 / (3.0 * g1)) *
                      std::pow(x_node, -4.0 * g / (3.0 * g1));

    Envelope env;
    env.C_xT = c1 + c2 + c3;
    // exp overflow saturates to inf, which propagates to the honest weak
    // bounds lower = 0, upper = inf.
    env.c_xT = env.C_xT + T * std::pow(rho0_max, g) * std::exp(g * env.C_xT / nu);
    env.upper = rho0_at_node * std::exp(env.C_xT / nu);
    env.lower = rho0_at_node * std::exp(-env.c_xT / nu);
    return env;
}

PathBoundReport path_lower_bounds(const LagrangianState& s, const GasModel& model, double E0,
                                  double C_gamma, std::size_t pair_stride) {
    if (!(E0 > 0.0) || !(C_gamma > 0.0))
        throw domain_error("path_lower_bounds: need E0 > 0 and C_gamma > 0");
    if (pair_stride == 0) pair_stride = 1;
    const double g = model.gamma;
    const double g1 = g - 1.0;
    const double ratio = E0 / C_gamma;
    const double node_coef = std::pow(ratio, -1.0 / (3.0 * g1));
    const double node_exp = g / (3.0 * g1);
    const double pair_coef = std::pow(ratio, -1.0 / g1);
    const double pair_exp = g / g1;
    constexpr double slack = 1.0 - 1e-12;

    PathBoundReport rep;
    const std::size_t nn = s.x.size();
    for (std::size_t i = 0; i < nn; ++i) {
        ++rep.nodes_checked;
        const double bound = s.x[i] > 0.0 ? node_coef * std::pow(s.x[i], node_exp) : 0.0;
        if (s.r[i] < bound * slack) ++rep.node_violations;
    }
    for (std::size_t i1 = 0; i1 < nn; i1 += pair_stride) {
        const double w1 = s.r[i1] * s.r[i1] * s.r[i1];
        for (std::size_t i2 = i1 + pair_stride; i2 < nn; i2 += pair_stride) {
            ++rep.pairs_checked;
            const double w2 = s.r[i2] * s.r[i2] * s.r[i2];
            const double bound = pair_coef * std::pow(s.x[i2] - s.x[i1], pair_exp);
            if (w2 - w1 < bound * slack) ++rep.pair_violations;
        }
    }
    return rep;
}

double weighted_pressure_increment(const LagrangianState& s, const GasModel& model, double dt) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cells(); ++j) {
        const double r13 = pow_int(s.r[j + 1], 13) - pow_int(s.r[j], 13);
        sum += std::pow(s.rho[j], 2.0 * model.gamma) * r13 / 13.0;
    }
    return dt * sum;
}

ExpansionFit fit_expansion(const std::vector<double>& times, const std::vector<double>& a1,
                           double t_lo, double t_hi, double gamma) {
    if (times.size() != a1.size())
        throw domain_error("fit_expansion: times and a1 must have equal length");
    if (!(t_lo < t_hi))
        throw domain_error("fit_expansion: need t_lo < t_hi");
    ExpansionFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.beta_paper = (6.0 * gamma - 7.0) / (3.0 * gamma);

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(a1[i] > 0.0))
            throw domain_error("fit_expansion: a1 values must be positive");
        const double lx = std::log1p(times[i]);
        const double ly = std::log(a1[i]);
        xs.push_back(lx);
        ys.push_back(ly);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.samples = xs.size();
    if (fit.samples < 10)
        throw domain_error("fit_expansion: window holds fewer than 10 samples");
    const double nn = static_cast<double>(fit.samples);
    const double denom = nn * sxx - sx * sx;
    fit.beta_hat = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.beta_hat * sx) / nn;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double res = ys[i] - (intercept + fit.beta_hat * xs[i]);
        ss += res * res;
    }
    fit.residual_rms = std::sqrt(ss / nn);
    return fit;
}

} // namespace nsp
