#include "casimir/mode_sum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "casimir/detail/format.hpp"
#include "casimir/error.hpp"
#include "casimir/specfun.hpp"

namespace casimir {

using detail::format_number;

ModeTable::ModeTable(std::size_t nodes, int l_max, bool slopes)
    : nodes_(nodes), l_max_(l_max), value_(nodes * static_cast<std::size_t>(l_max) * 2, 0.0),
      first_order_(value_.size(), 0.0) {
    if (slopes) slope_.assign(value_.size(), 0.0);
}

namespace {

constexpr Polarization kPols[] = {Polarization::TE, Polarization::TM};

// Products carry a factor exp(log_ratio), and log_ratio decreases with l. Below
// e^-150 (~1e-65) an order cannot reach any relative tolerance in use, so the
// fast kernel stops there; this matters for profiles, where each entry is an ODE solve.
constexpr double kLogRatioFloor = -150.0;

[[noreturn]] void contraction_failure(int l, Polarization p, double kappa, double product) {
    throw ContractionError("round-trip product " + format_number(product) + " outside (-1, 1) at l = " +
                               std::to_string(l) + ", " + polarization_name(p) + ", kappa = " + format_number(kappa),
                           product);
}

void check_input(const ModeSumInput& in) {
    if (in.sphere == nullptr || in.wall == nullptr || in.gap == nullptr)
        throw DomainError("mode table: media not set");
    if (!(in.r1 > 0.0 && in.r2 > in.r1)) throw DomainError("mode table: need 0 < r1 < r2");
    if (in.l_max < 1) throw DomainError("mode table: l_max must be >= 1");
    if (in.l_max > kMaxBesselOrder - 2)
        throw CapabilityError("mode table: l_max above the Bessel order cap " + std::to_string(kMaxBesselOrder));
    for (double k : in.kappa)
        if (!(k > 0.0)) throw DomainError("mode table: frequencies must be positive");
}

struct NodeMedia {
    double kappa, eps_m, eps1, eps2, mu2, xi;
};

NodeMedia node_media(const ModeSumInput& in, double kappa) {
    NodeMedia m{};
    m.kappa = kappa;
    m.eps_m = permittivity_at(*in.gap, kappa);
    m.eps1 = permittivity_at(*in.sphere, kappa);
    m.eps2 = permittivity_at(*in.wall, kappa);
    m.mu2 = in.wall->mu();
    m.xi = kappa * std::sqrt(m.eps_m);
    return m;
}

bool screened(const ModeSumInput& in, const NodeMedia& m) {
    return 2.0 * m.xi * (in.r2 - in.r1) > detail::kScreeningExponent;
}

double fill_node(const ModeSumInput& in, std::size_t node, ModeTable& table) {
    const NodeMedia m = node_media(in, in.kappa[node]);
    if (screened(in, m)) return 0.0;

    const int lmax = in.l_max;
    const RadialProfile* profile = in.sphere->profile();
    const double x = m.xi * in.r1;
    const BesselLadder at_x(lmax, x);
    const BesselLadder at_y(lmax, m.xi * in.r2);
    const BesselLadder at_x2(lmax, std::sqrt(m.eps2 * m.mu2) * m.kappa * in.r2);
    std::optional<BesselLadder> at_x1;
    if (profile == nullptr) at_x1.emplace(lmax, std::sqrt(m.eps1) * m.kappa * in.r1);

    double max_product = 0.0;
    for (int l = 1; l <= lmax; ++l) {
        const double log_ratio = at_x.log_i(l) - at_x.log_k(l) + at_y.log_k(l) - at_y.log_i(l);
        if (log_ratio < kLogRatioFloor) break;
        const double ratio = std::exp(log_ratio);
        const double degeneracy = 2.0 * l + 1.0;
        for (Polarization p : kPols) {
            const double fa =
                profile ? detail::variable_phase_factor(*profile, p, l, m.kappa, in.r1, m.eps_m, in.vp)
                        : detail::sphere_factor(p, l, m.eps1, m.eps_m, at_x, *at_x1);
            const double fb = detail::cavity_factor(p, l, m.eps2, m.mu2, m.eps_m, at_y, at_x2);
            const double ab = ratio * fa * fb;
            if (!(std::abs(ab) < 1.0)) contraction_failure(l, p, m.kappa, ab);
            max_product = std::max(max_product, std::abs(ab));
            table.value(node, l, p) = degeneracy * std::log1p(-ab);
            table.first_order(node, l, p) = -degeneracy * ab;
            if (table.has_slopes()) {
                const double g = detail::surface_slope(p, l, m.eps1, m.eps_m, fa, x, at_x.ratio_i(l),
                                                       at_x.ratio_k(l), at_x.psi_chi(l));
                const double dab = m.xi * g * fb * ratio;
                table.slope(node, l, p) = -degeneracy * dab / (1.0 - ab);
            }
        }
    }
    return max_product;
}

double fill_node_reference(const ModeSumInput& in, std::size_t node, ModeTable& table) {
    const NodeMedia m = node_media(in, in.kappa[node]);
    if (screened(in, m)) return 0.0;

    double max_product = 0.0;
    for (int l = 1; l <= in.l_max; ++l) {
        const double degeneracy = 2.0 * l + 1.0;
        for (Polarization p : kPols) {
            const Mode mode{l, p};
            const ExteriorAmplitude t1 = in.sphere->homogeneous()
                                             ? mie_exterior(mode, m.kappa, in.r1, m.eps1, m.eps_m)
                                             : variable_phase_T(*in.sphere, mode, m.kappa, in.r1, m.eps_m, in.vp);
            const InteriorAmplitude t2 = mie_interior_cavity(mode, m.kappa, in.r2, m.eps2, m.mu2, m.eps_m);
            if (t1.t.sign == 0 || t2.t.sign == 0) continue;
            const double ab = t1.t.sign * t2.t.sign * std::exp(t1.t.log_abs + t2.t.log_abs);
            if (!(std::abs(ab) < 1.0)) contraction_failure(l, p, m.kappa, ab);
            max_product = std::max(max_product, std::abs(ab));
            table.value(node, l, p) = degeneracy * std::log1p(-ab);
            table.first_order(node, l, p) = -degeneracy * ab;
            if (!table.has_slopes() || ab == 0.0) continue;
            // t_radius_derivative works with unscaled Bessel values.
            if (m.xi * in.r1 > 340.0) {
                if (std::abs(ab) > 1e-25)
                    throw CapabilityError("reference mode table: xi r1 = " + format_number(m.xi * in.r1) +
                                          " too large for unscaled derivative formulas");
                continue;
            }
            const double dt1 = t_radius_derivative(mode, m.kappa, in.r1, t1.value(), m.eps1, m.eps_m);
            const double dab = dt1 / t1.value() * ab;
            table.slope(node, l, p) = -degeneracy * dab / (1.0 - ab);
        }
    }
    return max_product;
}

template <class Fill>
ModeTable build(const ModeSumInput& in, Fill fill, bool parallel) {
    check_input(in);
    const std::size_t n = in.kappa.size();
    ModeTable table(n, in.l_max, in.slopes);
    std::vector<double> products(n, 0.0);
    std::vector<std::exception_ptr> errors(n);
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long j = 0; j < count; ++j) {
        const auto node = static_cast<std::size_t>(j);
        try {
            products[node] = fill(in, node, table);
        } catch (...) {
            errors[node] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (double p : products) table.max_product = std::max(table.max_product, p);
    return table;
}

}  // namespace

ModeTable mode_table(const ModeSumInput& in) { return build(in, fill_node, true); }

ModeTable mode_table_reference(const ModeSumInput& in) { return build(in, fill_node_reference, false); }

}  // namespace casimir
