#include "casimir/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "casimir/detail/format.hpp"
#include "casimir/error.hpp"

namespace casimir {

const char* polarization_name(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

namespace {

void check_mode(Mode mode) {
    if (mode.l < 1) throw DomainError("scattering: electromagnetic modes start at l = 1");
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("scattering: ") + what + " must be positive");
}

void check_permittivity(double eps, const char* what) {
    if (!(eps >= 1.0) || !std::isfinite(eps)) throw DomainError(std::string("scattering: ") + what + " must be >= 1");
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// F_A in terms of ratios at x = xi r1 and x1 = n1 kappa r1.
double sphere_factor_raw(Polarization pol, int l, double eps1, double eps_m, double x, double r_x, double q_x,
                         double r_x1) {
    const double c = std::sqrt(eps1 / eps_m);
    const double g = pol == Polarization::TE ? c : 1.0 / c;
    const double g_over_c = pol == Polarization::TE ? 1.0 : eps_m / eps1;
    const double num = (g_over_c - 1.0) * (l + 1) / x + g * r_x1 - r_x;
    const double den = l / x + q_x + g_over_c * (l + 1) / x + g * r_x1;
    return -num / den;
}

// F_B in terms of ratios at y = xi r2 and x2 = n2 kappa r2.
double cavity_factor_raw(Polarization pol, int l, double eps2, double mu2, double eps_m, double y, double r_y,
                         double q_y, double q_x2) {
    const double n_m = std::sqrt(eps_m);
    const double n2 = std::sqrt(eps2 * mu2);
    const double g = pol == Polarization::TE ? n2 / (n_m * mu2) : n_m * mu2 / n2;
    const double g_over_c = pol == Polarization::TE ? 1.0 / mu2 : eps_m / eps2;
    const double num = (1.0 - g_over_c) * l / y + q_y - g * q_x2;
    const double den = (l + 1) / y + r_y + g_over_c * l / y + g * q_x2;
    return num / den;
}

}  // namespace

namespace detail {

double sphere_factor(Polarization pol, int l, double eps1, double eps_m, const BesselLadder& at_x,
                     const BesselLadder& at_x1) {
    return sphere_factor_raw(pol, l, eps1, eps_m, at_x.z(), at_x.ratio_i(l), at_x.ratio_k(l), at_x1.ratio_i(l));
}

double cavity_factor(Polarization pol, int l, double eps2, double mu2, double eps_m, const BesselLadder& at_y,
                     const BesselLadder& at_x2) {
    return cavity_factor_raw(pol, l, eps2, mu2, eps_m, at_y.z(), at_y.ratio_i(l), at_y.ratio_k(l),
                             at_x2.ratio_k(l));
}

double surface_slope(Polarization pol, int l, double eps_surface, double eps_m, double shape_factor, double z,
                     double ratio_i, double ratio_k, double psi_chi) {
    const double one_plus = 1.0 + shape_factor;
    if (pol == Polarization::TE) return -(eps_surface - eps_m) / eps_m * one_plus * one_plus * psi_chi;
    const double dlog_psi = (l + 1) / z + ratio_i;
    const double dlog_chi = -l / z - ratio_k;
    const double tangential = dlog_psi + shape_factor * dlog_chi;
    const double radial = one_plus / z;
    return (eps_surface - eps_m) / eps_surface *
           (l * (l + 1.0) * radial * radial + eps_surface / eps_m * tangential * tangential) * psi_chi;
}

double variable_phase_factor(const RadialProfile& profile, Polarization pol, int l, double kappa, double r1,
                             double eps_m, const VariablePhaseOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 1>;

    const double xi = kappa * std::sqrt(eps_m);
    // A layered core is homogeneous out to its first interface; a single layer is
    // still integrated from near the origin.
    double r_start = std::min(1e-3 * r1, 1e-3 / kappa);
    if (profile.interpolation == RadialProfile::Interpolation::piecewise_constant) {
        const auto inner = profile.breakpoints();
        if (!inner.empty() && inner.front() < r1) r_start = std::max(r_start, inner.front());
    }

    // Seed: exact homogeneous sphere of radius r_start with the innermost permittivity.
    const double eps0 = profile.value(0.5 * r_start);
    State f{0.0};
    {
        const double x = xi * r_start;
        const auto at_x = detail::bessel_ratios(l, x);
        const auto at_x1 = detail::bessel_ratios(l, std::sqrt(eps0) * kappa * r_start);
        f[0] = sphere_factor_raw(pol, l, eps0, eps_m, x, at_x.ratio_i, at_x.ratio_k, at_x1.ratio_i);
    }

    // Integrate in s = ln r; the relaxation rate (2l+1)/r becomes constant in s.
    double eps_here = eps0;
    auto rhs = [&](const State& y, State& dyds, double s) {
        const double r = std::exp(s);
        const double z = xi * r;
        const auto b = detail::bessel_ratios(l, z);
        const double g = surface_slope(pol, l, eps_here, eps_m, y[0], z, b.ratio_i, b.ratio_k, b.psi_chi);
        dyds[0] = r * xi * (g - y[0] / b.psi_chi);
    };

    std::vector<double> edges{r_start};
    for (double b : profile.breakpoints())
        if (b > r_start && b < r1) edges.push_back(b);
    edges.push_back(r1);

    // The floor keeps the error ratio defined when the factor is identically zero.
    const double abs_tol = std::max(opts.abs_tol, std::numeric_limits<double>::min());
    auto stepper = odeint::make_controlled(abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
    long steps = 0;
    double last_r = r_start;
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = std::log(edges[seg]);
        const double b = std::log(edges[seg + 1]);
        if (!(b > a)) continue;
        eps_here = profile.value(0.5 * (edges[seg] + edges[seg + 1]));
        const bool linear = profile.interpolation == RadialProfile::Interpolation::piecewise_linear;
        auto seg_rhs = [&](const State& y, State& dyds, double s) {
            if (linear) eps_here = profile.value(std::exp(s));
            rhs(y, dyds, s);
        };
        double s = a;
        double ds = std::min(0.05, b - a);
        stepper.reset();
        const double end_slack = 1e-13 * (std::abs(b) + 1.0);
        while (b - s > end_slack) {
            if (++steps > opts.max_steps)
                throw ConvergenceError("variable_phase_T: step budget exhausted at r = " +
                                           detail::format_number(last_r),
                                       last_r);
            if (s + ds > b) ds = b - s;
            if (ds < 1e-14 * (std::abs(s) + 1.0))
                throw ConvergenceError("variable_phase_T: step size underflow at r = " + detail::format_number(last_r),
                                       last_r);
            if (stepper.try_step(seg_rhs, f, s, ds) == odeint::success) {
                last_r = std::exp(s);
                if (!std::isfinite(f[0]))
                    throw ConvergenceError("variable_phase_T: non-finite amplitude at r = " +
                                               detail::format_number(last_r),
                                           last_r);
            }
        }
    }
    return f[0];
}

}  // namespace detail

ExteriorAmplitude mie_exterior(Mode mode, double kappa, double r1, double eps1, double eps_m) {
    check_mode(mode);
    check_positive(kappa, "kappa");
    check_positive(r1, "r1");
    check_permittivity(eps1, "eps1");
    check_permittivity(eps_m, "eps_M");

    const double xi = kappa * std::sqrt(eps_m);
    const BesselLadder at_x(mode.l, xi * r1);
    const BesselLadder at_x1(mode.l, std::sqrt(eps1) * kappa * r1);
    const double f = detail::sphere_factor(mode.pol, mode.l, eps1, eps_m, at_x, at_x1);

    ExteriorAmplitude out{mode, kappa, r1, {}, f};
    const int s = sign_of(f);
    if (s != 0) {
        out.t.sign = s * static_cast<int>(detail::sigma(mode.pol));
        out.t.log_abs = std::log(std::abs(f)) + at_x.log_i(mode.l) - at_x.log_k(mode.l) - std::log(xi);
    }
    return out;
}

InteriorAmplitude mie_interior_cavity(Mode mode, double kappa, double r2, double eps2, double mu2, double eps_m) {
    check_mode(mode);
    check_positive(kappa, "kappa");
    check_positive(r2, "r2");
    check_permittivity(eps2, "eps2");
    check_positive(mu2, "mu2");
    check_permittivity(eps_m, "eps_M");

    const double xi = kappa * std::sqrt(eps_m);
    const BesselLadder at_y(mode.l, xi * r2);
    const BesselLadder at_x2(mode.l, std::sqrt(eps2 * mu2) * kappa * r2);
    const double f = detail::cavity_factor(mode.pol, mode.l, eps2, mu2, eps_m, at_y, at_x2);

    InteriorAmplitude out{mode, kappa, r2, {}, f};
    const int s = sign_of(f);
    if (s != 0) {
        out.t.sign = s * static_cast<int>(detail::sigma(mode.pol));
        out.t.log_abs = std::log(std::abs(f)) + at_y.log_k(mode.l) - at_y.log_i(mode.l) + std::log(xi);
    }
    return out;
}

ExteriorAmplitude variable_phase_T(const ResponseModel& profile, Mode mode, double kappa, double r1, double eps_m,
                                   const VariablePhaseOptions& opts) {
    check_mode(mode);
    check_positive(kappa, "kappa");
    check_positive(r1, "r1");
    check_permittivity(eps_m, "eps_M");
    const RadialProfile* p = profile.profile();
    if (p == nullptr) {
        // A homogeneous model is the one-layer profile.
        const RadialProfile flat{{r1}, {permittivity_at(profile, kappa)},
                                 RadialProfile::Interpolation::piecewise_constant};
        return variable_phase_T(ResponseModel::layered(flat.radii, flat.eps), mode, kappa, r1, eps_m, opts);
    }

    const double f = detail::variable_phase_factor(*p, mode.pol, mode.l, kappa, r1, eps_m, opts);
    const double xi = kappa * std::sqrt(eps_m);
    const BesselLadder at_x(mode.l, xi * r1);
    ExteriorAmplitude out{mode, kappa, r1, {}, f};
    const int s = sign_of(f);
    if (s != 0) {
        out.t.sign = s * static_cast<int>(detail::sigma(mode.pol));
        out.t.log_abs = std::log(std::abs(f)) + at_x.log_i(mode.l) - at_x.log_k(mode.l) - std::log(xi);
    }
    return out;
}

double t_radius_derivative(Mode mode, double kappa, double r1, double t, double eps_surface, double eps_m) {
    check_mode(mode);
    check_positive(kappa, "kappa");
    check_positive(r1, "r1");
    check_permittivity(eps_surface, "eps1");
    check_permittivity(eps_m, "eps_M");

    constexpr double pi = std::numbers::pi;
    const int l = mode.l;
    const double xi = kappa * std::sqrt(eps_m);
    const double z = xi * r1;
    const BesselPair b = bessel_eval(l, z);
    const double i_l = std::exp(b.log_i);
    const double k_l = std::exp(b.log_k);
    const double i_next = b.ratio_i * i_l;
    const double k_next = (b.ratio_k + (2.0 * l + 1.0) / z) * k_l;
    // I_{l+1/2}, K_{l+1/2} and their l+3/2 neighbours.
    const double to_i = std::sqrt(2.0 * z / pi);
    const double to_k = std::sqrt(pi * z / 2.0);
    const double big_i = to_i * i_l, big_i_next = to_i * i_next;
    const double big_k = to_k * k_l, big_k_next = to_k * k_next;

    const double contrast = eps_surface - eps_m;
    if (mode.pol == Polarization::TE) {
        const double a1 = -2.0 * t * xi * big_k + pi * big_i;
        return contrast * a1 * a1 * xi * r1 / (2.0 * pi * eps_m);
    }
    const double a2 = pi * big_i + 2.0 * t * xi * big_k;
    const double a3 = 2.0 * xi * t * ((l + 1) * big_k - z * big_k_next) + pi * z * big_i_next + pi * (l + 1) * big_i;
    return contrast * (a2 * a2 * l * (l + 1.0) + a3 * a3 * eps_surface / eps_m) / (2.0 * pi * xi * r1 * eps_surface);
}

}  // namespace casimir
