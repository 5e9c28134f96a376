#include "nsp/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsp/errors.hpp"
#include "nsp/quadrature.hpp"

namespace nsp {

namespace {

struct LEPoint {
    double th;
    double dth;
};

LEPoint le_rhs(double xi, LEPoint y, double n) {
    const double src = y.th > 0.0 ? std::pow(y.th, n) : 0.0;
    return {y.dth, -2.0 / xi * y.dth - src};
}

LEPoint rk4_step(double xi, LEPoint y, double h, double n) {
    const LEPoint k1 = le_rhs(xi, y, n);
    const LEPoint k2 = le_rhs(xi + 0.5 * h, {y.th + 0.5 * h * k1.th, y.dth + 0.5 * h * k1.dth}, n);
    const LEPoint k3 = le_rhs(xi + 0.5 * h, {y.th + 0.5 * h * k2.th, y.dth + 0.5 * h * k2.dth}, n);
    const LEPoint k4 = le_rhs(xi + h, {y.th + h * k3.th, y.dth + h * k3.dth}, n);
    return {y.th + h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th),
            y.dth + h / 6.0 * (k1.dth + 2.0 * k2.dth + 2.0 * k3.dth + k4.dth)};
}

double series_theta(double xi, double n) {
    const double x2 = xi * xi;
    return 1.0 - x2 / 6.0 + n * x2 * x2 / 120.0;
}

double series_dtheta(double xi, double n) {
    return -xi / 3.0 + n * xi * xi * xi / 30.0;
}

} // namespace

LaneEmdenProfile solve_lane_emden(double gamma, double tol, double xi_max) {
    if (!(gamma > 1.0 && gamma <= 2.0))
        throw domain_error("solve_lane_emden: gamma must lie in (1, 2]");
    if (!(tol > 0.0) || !(xi_max > 1.0))
        throw domain_error("solve_lane_emden: tol and xi_max must be positive");

    LaneEmdenProfile p;
    p.gamma = gamma;
    p.n = 1.0 / (gamma - 1.0);
    const double n = p.n;

    const double h = 5e-4;
    const double xi_start = 0.02; // series start past the removable singularity
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(xi_max / h / 200000.0));

    double xi = xi_start;
    LEPoint y{series_theta(xi, n), series_dtheta(xi, n)};

    p.xi.push_back(xi);
    p.theta.push_back(y.th);
    p.dtheta.push_back(y.dth);

    std::size_t k = 0;
    bool crossed = false;
    while (xi < xi_max && !crossed) {
        const double hh = std::min(h, xi_max - xi);
        const LEPoint y_next = rk4_step(xi, y, hh, n);
        if (y_next.th <= 0.0) {
            // Bracketed the first zero: keep the pre-crossing point, then
            // bisect the sub-step length.
            if (p.xi.back() != xi) {
                p.xi.push_back(xi);
                p.theta.push_back(y.th);
                p.dtheta.push_back(y.dth);
            }
            double lo = 0.0, hi = hh;
            LEPoint y_hi = y_next;
            for (int it = 0; it < 200 && (hi - lo) > tol * 1e-3; ++it) {
                const double mid = 0.5 * (lo + hi);
                const LEPoint ym = rk4_step(xi, y, mid, n);
                if (ym.th <= 0.0) {
                    hi = mid;
                    y_hi = ym;
                } else {
                    lo = mid;
                }
            }
            p.xi1 = xi + hi;
            p.finite_support = true;
            p.dtheta_at_xi1 = y_hi.dth;
            p.xi.push_back(p.xi1);
            p.theta.push_back(0.0);
            p.dtheta.push_back(y_hi.dth);
            crossed = true;
            break;
        }
        xi += hh;
        y = y_next;
        if (++k % stride == 0) {
            p.xi.push_back(xi);
            p.theta.push_back(y.th);
            p.dtheta.push_back(y.dth);
        }
    }

    if (!crossed) {
        if (p.xi.back() != xi) {
            p.xi.push_back(xi);
            p.theta.push_back(y.th);
            p.dtheta.push_back(y.dth);
        }
        if (n < 5.0) {
            std::ostringstream msg;
            msg << "solve_lane_emden: support not found before xi_max = " << xi_max
                << " (reached xi = " << xi << ", theta = " << y.th << ")";
            throw numerical_error(msg.str());
        }
        p.finite_support = false;
        p.dtheta_at_xi1 = 0.0;
    }
    return p;
}

namespace {

std::size_t bracket_index(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
}

} // namespace

double LaneEmdenProfile::theta_at(double x) const {
    if (x <= xi.front()) return series_theta(std::max(x, 0.0), n);
    if (x >= xi.back()) return finite_support ? 0.0 : theta.back();
    const std::size_t i = bracket_index(xi, x);
    const double h = xi[i + 1] - xi[i];
    const double s = (x - xi[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * theta[i] + (s3 - 2 * s2 + s) * h * dtheta[i] +
                     (-2 * s3 + 3 * s2) * theta[i + 1] + (s3 - s2) * h * dtheta[i + 1];
    return std::max(v, 0.0);
}

double LaneEmdenProfile::dtheta_at(double x) const {
    if (x <= xi.front()) return series_dtheta(std::max(x, 0.0), n);
    if (x >= xi.back()) return finite_support ? dtheta_at_xi1 : dtheta.back();
    const std::size_t i = bracket_index(xi, x);
    const double h = xi[i + 1] - xi[i];
    const double s = (x - xi[i]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * theta[i] / h + (3 * s2 - 4 * s + 1) * dtheta[i] +
            (-6 * s2 + 6 * s) * theta[i + 1] / h + (3 * s2 - 2 * s) * dtheta[i + 1]);
}

void rescale_profile(LaneEmdenProfile& profile, double rho_c, const GasModel& model) {
    if (!(rho_c > 0.0))
        throw domain_error("rescale_profile: rho_c must be positive");
    profile.rho_c = rho_c;
    const double g = profile.gamma;
    profile.length_scale =
        std::sqrt((profile.n + 1.0) * model.kappa * std::pow(rho_c, g - 2.0) / (4.0 * kPi));
    profile.physical_radius =
        profile.finite_support ? profile.length_scale * profile.xi1
                               : std::numeric_limits<double>::infinity();
    // M = 4 pi L^3 rho_c * xi^2 |theta'| evaluated at the end of integration
    // (the exact total for compact support, the integrated-so-far mass otherwise).
    const double xe = profile.xi.back();
    const double omega = -xe * xe * profile.dtheta.back();
    profile.physical_mass =
        4.0 * kPi * std::pow(profile.length_scale, 3.0) * rho_c * std::max(omega, 0.0);
}

void InitialData::validate() const {
    if (!(a0 > eps) || !(eps >= 0.0))
        throw domain_error("InitialData: need 0 <= eps < a0");
    if (!(M > 0.0))
        throw domain_error("InitialData: non-positive mass");
    if (!(rho0_max > 0.0))
        throw domain_error("InitialData: non-positive density scale");
    const double u_at_eps = u0(eps);
    if (std::abs(u_at_eps) > 1e-10 * std::max(1.0, std::abs(u0(0.5 * (eps + a0)))))
        throw domain_error("InitialData: u0(eps) != 0");
    const double du = du0_dr(a0);
    const double ub = 2.0 * u0(a0) / a0;
    const double comp_scale = std::max({1.0, std::abs(du), std::abs(ub)});
    if (std::abs(du + ub) > 1e-10 * comp_scale)
        throw domain_error("InitialData: compatibility u0'(a0) + 2 u0(a0)/a0 = 0 violated");
    if (std::abs(rho0(a0)) > 1e-10 * rho0_max)
        throw domain_error("InitialData: rho0(a0) != 0");
    for (int i = 1; i < 64; ++i) {
        const double r = eps + (a0 - eps) * i / 64.0;
        if (!(rho0(r) > 0.0))
            throw domain_error("InitialData: rho0 not positive in the interior");
    }
}

namespace {

double residual_impl(const std::function<double(double)>& rho,
                     const std::function<double(double)>& enclosed, double eps, double a0,
                     const GasModel& model, std::size_t samples) {
    if (samples < 3) throw domain_error("hydrostatic residual: need at least 3 samples");
    const double dr = (a0 - eps) / static_cast<double>(samples - 1);
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < samples; ++j) {
        const double rj = eps + dr * static_cast<double>(j);
        const double rj1 = rj + dr;
        if (rj <= 0.0) continue;
        const double dP = (pressure(rho(rj1), model) - pressure(rho(rj), model)) / dr;
        const double grav = 4.0 * kPi * rho(rj) / (rj * rj) * enclosed(rj);
        worst = std::max(worst, std::abs(dP + grav));
    }
    return worst;
}

} // namespace

double hydrostatic_residual(const LaneEmdenProfile& profile, double eps, double a0,
                            double amplitude_scale, const GasModel& model, std::size_t samples) {
    const double L = profile.length_scale;
    const double rho_c = profile.rho_c;
    if (!(L > 0.0))
        throw domain_error("hydrostatic_residual: profile has no physical rescaling");
    auto rho = [&](double r) {
        return amplitude_scale * rho_c * std::pow(profile.theta_at(r / L), profile.n);
    };
    auto enclosed = [&](double r) {
        const double xi = r / L;
        return amplitude_scale * rho_c * L * L * L * std::max(-xi * xi * profile.dtheta_at(xi), 0.0);
    };
    return residual_impl(rho, enclosed, eps, a0, model, samples);
}

InitialData hydrostatic_initial_data(const LaneEmdenProfile& profile_in, double rho_c, double eps,
                                     const GasModel& model, double truncation_floor,
                                     double target_mass, std::size_t residual_samples) {
    model.validate();
    LaneEmdenProfile profile = profile_in;
    rescale_profile(profile, rho_c, model);
    const double L = profile.length_scale;
    const double n = profile.n;

    double a0;
    double floor = 0.0;
    if (profile.finite_support) {
        a0 = L * profile.xi1;
    } else {
        if (!(truncation_floor > 0.0))
            throw domain_error(
                "hydrostatic_initial_data: infinite support requires a truncation density floor");
        floor = truncation_floor;
        const double theta_t = std::pow(floor / rho_c, 1.0 / n);
        if (theta_t >= 1.0)
            throw domain_error("hydrostatic_initial_data: truncation floor above central density");
        // theta is decreasing: bisect for theta(xi_t) = theta_t.
        double lo = profile.xi.front(), hi = profile.xi.back();
        if (profile.theta.back() > theta_t)
            throw domain_error("hydrostatic_initial_data: truncation floor below theta(xi_max); "
                               "increase xi_max or the floor");
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (profile.theta_at(mid) > theta_t ? lo : hi) = mid;
        }
        a0 = L * hi; // the side where theta has already dropped to the floor
    }
    if (!(eps >= 0.0) || !(eps < a0))
        throw domain_error("hydrostatic_initial_data: eps must lie in [0, a0)");

    auto rho_raw = [profile, rho_c, n, L, floor](double r) {
        const double v = rho_c * std::pow(profile.theta_at(r / L), n) - floor;
        return std::max(v, 0.0);
    };
    const double tol = 1e-13 * rho_c * std::max(a0 * a0 * a0, 1.0);
    const double m_natural =
        4.0 * kPi * integrate([&](double r) { return rho_raw(r) * r * r; }, eps, a0, tol);
    double amp = 1.0;
    if (target_mass > 0.0) {
        if (!(m_natural > 0.0))
            throw domain_error("hydrostatic_initial_data: profile carries no mass on [eps, a0]");
        amp = target_mass / m_natural;
    }

    InitialData d;
    d.gamma = model.gamma;
    d.kappa = model.kappa;
    d.eps = eps;
    d.a0 = a0;
    d.rho0 = [rho_raw, amp](double r) { return amp * rho_raw(r); };
    d.u0 = [](double) { return 0.0; };
    d.du0_dr = [](double) { return 0.0; };
    d.M = amp * m_natural;
    d.mass_defect =
        4.0 * kPi * integrate([&](double r) { return amp * rho_raw(r) * r * r; }, 0.0, eps, tol);
    d.rho0_max = d.rho0(eps);
    const double g = model.gamma;
    d.E0 = integrate(
        [&](double r) {
            return model.kappa / (g - 1.0) * std::pow(d.rho0(r), g) * r * r;
        },
        eps, a0, tol * model.kappa);
    if (floor == 0.0) {
        d.hydrostatic_residual =
            hydrostatic_residual(profile, std::max(eps, 1e-6 * a0), a0, amp, model,
                                 residual_samples);
    } else {
        auto enclosed = [&](double r) {
            const double xi = r / L;
            const double full =
                rho_c * L * L * L * std::max(-xi * xi * profile.dtheta_at(xi), 0.0);
            return amp * (full - floor * r * r * r / 3.0);
        };
        auto rho_scaled = [&](double r) { return amp * rho_raw(r); };
        d.hydrostatic_residual = residual_impl(rho_scaled, enclosed, std::max(eps, 1e-6 * a0), a0,
                                               model, residual_samples);
    }
    d.validate();
    return d;
}

InitialData uniform_initial_data(double rho_bar, double a0, double eps, const GasModel& model,
                                 double taper_fraction) {
    model.validate();
    if (!(rho_bar > 0.0) || !(a0 > eps) || !(eps >= 0.0))
        throw domain_error("uniform_initial_data: need rho_bar > 0 and 0 <= eps < a0");
    if (!(taper_fraction >= 0.0 && taper_fraction < 0.5))
        throw domain_error("uniform_initial_data: taper_fraction must lie in [0, 0.5)");
    const double r_t = a0 * (1.0 - taper_fraction);
    auto rho = [rho_bar, r_t, a0](double r) {
        if (r <= r_t) return rho_bar;
        if (r >= a0) return 0.0;
        const double q = (a0 - r) / (a0 - r_t);
        return rho_bar * q * q * (3.0 - 2.0 * q);
    };
    InitialData d;
    d.gamma = model.gamma;
    d.kappa = model.kappa;
    d.eps = eps;
    d.a0 = a0;
    d.rho0 = rho;
    d.u0 = [](double) { return 0.0; };
    d.du0_dr = [](double) { return 0.0; };
    const double tol = 1e-13 * rho_bar * a0 * a0 * a0;
    d.M = 4.0 * kPi * integrate([&](double r) { return rho(r) * r * r; }, eps, a0, tol);
    d.mass_defect = 4.0 * kPi * integrate([&](double r) { return rho(r) * r * r; }, 0.0, eps, tol);
    d.rho0_max = rho_bar;
    const double g = model.gamma;
    d.E0 = integrate(
        [&](double r) { return model.kappa / (g - 1.0) * std::pow(rho(r), g) * r * r; }, eps, a0,
        tol * model.kappa);
    if (taper_fraction > 0.0) d.validate();
    return d;
}

InitialData perturbed_initial_data(const InitialData& base, double velocity_amplitude,
                                   const std::string& mode) {
    if (mode != "cubic")
        throw domain_error("perturbed_initial_data: unknown velocity shape '" + mode + "'");
    if (velocity_amplitude == 0.0) return base;
    const double mid = 0.5 * (base.eps + base.a0);
    if (std::abs(base.u0(mid)) != 0.0 || std::abs(base.u0(base.a0)) != 0.0)
        throw domain_error("perturbed_initial_data: base must carry zero velocity");

    const double eps = base.eps;
    const double a0 = base.a0;
    const double span = a0 - eps;
    if (!(span > 0.0))
        throw domain_error("perturbed_initial_data: degenerate domain");
    // v(q) = q + b q^2 - b q^3 with b fixed by the compatibility condition;
    // v(eps) = 0, v(a0) = 1 (unit normalization).
    const double b = 1.0 + 2.0 * span / a0;
    const double A = velocity_amplitude;

    InitialData d = base;
    d.u0 = [eps, span, b, A](double r) {
        const double q = (r - eps) / span;
        return A * (q + b * q * q - b * q * q * q);
    };
    d.du0_dr = [eps, span, b, A](double r) {
        const double q = (r - eps) / span;
        return A * (1.0 + 2.0 * b * q - 3.0 * b * q * q) / span;
    };
    const double scale = std::abs(A) * (std::abs(b) + 1.0);
    const double tol = 1e-13 * std::max(1.0, base.rho0_max * scale * scale * a0 * a0 * a0);
    const double g = base.gamma;
    d.E0 = integrate(
        [&](double r) {
            const double uu = d.u0(r);
            return (0.5 * d.rho0(r) * uu * uu +
                    base.kappa / (g - 1.0) * std::pow(d.rho0(r), g)) *
                   r * r;
        },
        eps, a0, tol);
    d.validate();
    return d;
}

} // namespace nsp
