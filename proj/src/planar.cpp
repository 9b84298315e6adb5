#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/detail/format.hpp"
#include "casimir/energetics.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using detail::format_number;

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Value at x = 0 of the polynomial through (x_i, y_i).
double lagrange_at_zero(const std::vector<double>& x, const std::vector<double>& y) {
    double out = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double basis = 1.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != i) basis *= -x[k] / (x[i] - x[k]);
        out += y[i] * basis;
    }
    return out;
}

}  // namespace

double lifshitz_planar_pressure(double d, double eps1, double eps2, double eps_m, double mu2) {
    if (!(d > 0.0)) throw DomainError("lifshitz_planar_pressure: d must be positive");
    // P = -(1 / 2 pi^2) int dkappa int_{xi}^inf dq q^2 sum_P R e^{-2qd} / (1 - R e^{-2qd})
    const QuadratureRule rule = semi_infinite_rule(160, 1.0 / d);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double kappa = rule.nodes[i];
        const double xi = kappa * std::sqrt(eps_m);
        double inner = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double q = xi + rule.nodes[j];
            const double q1 = std::sqrt(q * q + (eps1 - eps_m) * kappa * kappa);
            const double q2 = std::sqrt(q * q + (eps2 * mu2 - eps_m) * kappa * kappa);
            const double te = (q - q1) / (q + q1) * (mu2 * q - q2) / (mu2 * q + q2);
            const double tm = (eps1 * q - eps_m * q1) / (eps1 * q + eps_m * q1) * (eps2 * q - eps_m * q2) /
                              (eps2 * q + eps_m * q2);
            const double e = std::exp(-2.0 * q * d);
            inner += rule.weights[j] * q * q * (te * e / (1.0 - te * e) + tm * e / (1.0 - tm * e));
        }
        sum += rule.weights[i] * inner;
    }
    return -sum / (2.0 * std::numbers::pi * std::numbers::pi);
}

PlanarResult planar_limit_force(double d, double eps1, double eps2, double eps_m,
                                const std::vector<double>& radius_ladder, const PlanarOptions& opts) {
    if (!(d > 0.0)) throw DomainError("planar_limit_force: d must be positive");
    if (radius_ladder.size() < 2)
        throw ConvergenceError("planar_limit_force: a radius ladder needs at least two entries to extrapolate");
    for (std::size_t i = 0; i < radius_ladder.size(); ++i)
        if (!(radius_ladder[i] > 0.0) || (i > 0 && !(radius_ladder[i] > radius_ladder[i - 1])))
            throw DomainError("planar_limit_force: radius ladder must be positive and increasing");

    SpectrumSpec spectrum = opts.spectrum;
    spectrum.l.l_max = opts.l_max;
    EnergyOptions energy = opts.energy;
    energy.allow_undefined_sign = true;

    PlanarResult out;
    for (double r1 : radius_ladder) {
        Geometry g{r1, r1 + d, ResponseModel::constant(eps1), ResponseModel::constant(eps2),
                   ResponseModel::constant(eps_m)};
        const EnergyReport p = interaction_pressure(g, spectrum, PressureMethod::calogero_analytic, energy);
        out.table.push_back({r1, -p.value, p.l_max_used, p.n_kappa_used});
        out.max_product = std::max(out.max_product, p.diagnostics.max_product);
    }

    const std::size_t k = std::min<std::size_t>(3, out.table.size());
    std::vector<double> x, y;
    for (std::size_t i = out.table.size() - k; i < out.table.size(); ++i) {
        x.push_back(d / out.table[i].r1);
        y.push_back(out.table[i].force);
    }
    out.extrapolated = lagrange_at_zero(x, y);
    out.fit = k == 3 ? "quadratic in d/r1 through the three largest radii" : "linear in d/r1 through two radii";
    out.sign = sign_of(out.extrapolated);
    if (out.sign != sign_of(out.table.back().force))
        throw ConvergenceError("planar_limit_force: extrapolated value " + format_number(out.extrapolated) +
                               " changes sign against the largest radius (" + format_number(out.table.back().force) +
                               "); extend the ladder");
    out.lifshitz_reference = lifshitz_planar_pressure(d, eps1, eps2, eps_m);
    return out;
}

}  // namespace casimir
