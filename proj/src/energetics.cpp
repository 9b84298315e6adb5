#include "casimir/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "casimir/detail/format.hpp"
#include "casimir/detail/neumaier.hpp"
#include "casimir/error.hpp"
#include "casimir/mode_sum.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using detail::format_number;
using detail::NeumaierSum;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Polarization kPols[] = {Polarization::TE, Polarization::TM};

// Static-limit evaluation point, in units of 1/(r2 - r1).
constexpr double kStaticKappa = 1e-6;

}  // namespace

void Geometry::validate() const {
    if (!(r1 > 0.0) || !std::isfinite(r1)) throw DomainError("geometry: r1 must be positive");
    if (!(r2 > r1) || !std::isfinite(r2)) throw DomainError("geometry: need r1 < r2");
    if (!gap.homogeneous()) throw DomainError("geometry: the gap medium must be homogeneous");
    if (!wall.homogeneous()) throw DomainError("geometry: the cavity wall must be homogeneous");
    if (gap.mu() != 1.0) throw DomainError("geometry: the gap medium must be nonmagnetic");
    if (sphere.mu() != 1.0) throw DomainError("geometry: the sphere must be nonmagnetic");
}

SpectrumSpec SpectrumSpec::matsubara(double temperature) {
    SpectrumSpec s;
    s.mode = Mode::matsubara;
    s.temperature = temperature;
    return s;
}

void SpectrumSpec::validate() const {
    if (n_kappa < 8) throw DomainError("spectrum: n_kappa must be >= 8");
    if (n_kappa_max < 2 * n_kappa) throw DomainError("spectrum: n_kappa_max must allow one doubling of n_kappa");
    if (!(kappa_tolerance > 0.0)) throw DomainError("spectrum: kappa tolerance must be positive");
    if (mode == Mode::matsubara && !(temperature > 0.0 && std::isfinite(temperature)))
        throw DomainError("spectrum: Matsubara sums need T > 0");
    if (!(matsubara_tolerance > 0.0) || matsubara_consecutive < 1 || n_max < 1)
        throw DomainError("spectrum: invalid Matsubara cutoff policy");
    if (!(l.tolerance > 0.0) || l.consecutive < 1 || l.l_max < 1) throw DomainError("spectrum: invalid l policy");
}

PairSign pair_sign(const Geometry& g) {
    const SignGrid gs = default_sign_grid(g.sphere, g.r1, g.r2);
    const SignGrid gw = default_sign_grid(g.wall, g.r1, g.r2);
    PairSign s;
    s.sphere = classify_sign(g.sphere, g.gap, gs.kappa, gs.r);
    s.wall = classify_sign(g.wall, g.gap, gw.kappa, gw.r);
    s.value = sign_product(s.sphere.value, s.wall.value);
    return s;
}

namespace {

struct NodeSet {
    std::vector<double> kappa;
    std::vector<double> weight;

    void add(double k, double w) {
        kappa.push_back(k);
        weight.push_back(w);
    }
};

enum class Quantity { value, slope };

struct SumResult {
    double value = 0.0;
    double first_order = 0.0;
    int l_used = 0;
    double l_tail = 0.0;
    double max_product = 0.0;
    std::vector<double> node_totals;
    std::vector<ModeContribution> per_mode;
};

ModeTable tabulate(const Geometry& g, const NodeSet& nodes, int l_max, bool slopes, const EnergyOptions& opts) {
    ModeSumInput in;
    in.r1 = g.r1;
    in.r2 = g.r2;
    in.sphere = &g.sphere;
    in.wall = &g.wall;
    in.gap = &g.gap;
    in.kappa = nodes.kappa;
    in.l_max = l_max;
    in.slopes = slopes;
    in.vp = opts.variable_phase;
    return opts.kernel == Kernel::parallel ? mode_table(in) : mode_table_reference(in);
}

// Products fall off like (r1/r2)^(2l); start where that reaches ~1e-7 and double.
int initial_l(const Geometry& g, int cap) {
    const double guess = std::ceil(8.0 / std::log(g.r2 / g.r1)) + 8.0;
    const int l = static_cast<int>(std::min(guess, 1e6));
    return std::clamp(l, std::min(8, cap), cap);
}

// Weighted sum over nodes, l and polarisation in the fixed order (l, P, node).
// fixed_l > 0 sums exactly 1..fixed_l; otherwise the l policy decides.
SumResult sum_modes(const Geometry& g, const NodeSet& nodes, Quantity q, const LPolicy& policy, int fixed_l,
                    const EnergyOptions& opts) {
    int l_max = fixed_l > 0 ? fixed_l : initial_l(g, policy.l_max);
    for (;;) {
        const ModeTable table = tabulate(g, nodes, l_max, q == Quantity::slope, opts);
        auto entry = [&](std::size_t j, int l, Polarization p) {
            return q == Quantity::slope ? table.slope(j, l, p) : table.value(j, l, p);
        };

        NeumaierSum running;
        std::vector<ModeContribution> per_mode;
        int quiet = 0, l_stop = 0;
        double last = 0.0, before_last = 0.0;
        for (int l = 1; l <= l_max; ++l) {
            double c_l = 0.0;
            for (Polarization p : kPols) {
                NeumaierSum c;
                for (std::size_t j = 0; j < nodes.kappa.size(); ++j) c.add(nodes.weight[j] * entry(j, l, p));
                per_mode.push_back({l, p, c.value()});
                running.add(c.value());
                c_l += c.value();
            }
            before_last = last;
            last = c_l;
            if (fixed_l > 0) continue;
            if (std::abs(c_l) <= policy.tolerance * std::abs(running.value())) {
                if (++quiet >= policy.consecutive) {
                    l_stop = l;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if (fixed_l > 0) l_stop = l_max;
        if (l_stop == 0) {
            if (l_max >= policy.l_max)
                throw ConvergenceError("l-sum not converged at l_max = " + std::to_string(l_max) +
                                       ": last order adds " + format_number(last) + " to a running total of " +
                                       format_number(running.value()) + " (tail tolerance " +
                                       format_number(policy.tolerance) + ")");
            l_max = std::min(2 * l_max, policy.l_max);
            continue;
        }

        SumResult r;
        r.value = running.value();
        r.l_used = l_stop;
        r.max_product = table.max_product;
        r.per_mode = std::move(per_mode);
        const double rho = before_last != 0.0 ? std::abs(last / before_last) : 0.0;
        r.l_tail = rho < 1.0 ? std::abs(last) * rho / (1.0 - rho) : std::abs(last);
        r.node_totals.resize(nodes.kappa.size());
        NeumaierSum first;
        for (std::size_t j = 0; j < nodes.kappa.size(); ++j) {
            NeumaierSum t;
            for (int l = 1; l <= l_stop; ++l)
                for (Polarization p : kPols) {
                    t.add(nodes.weight[j] * entry(j, l, p));
                    first.add(nodes.weight[j] * table.first_order(j, l, p));
                }
            r.node_totals[j] = t.value();
        }
        r.first_order = first.value();
        return r;
    }
}

struct Integrated {
    SumResult sum;
    NodeSet nodes;
    int n_kappa = 0;
    long matsubara_terms = 0;
    double change = 0.0;
    double dominant_kappa = std::numeric_limits<double>::quiet_NaN();
};

// Node whose weighted l-sum is largest in magnitude.
double dominant_node(const NodeSet& nodes, const SumResult& r) {
    double best = -1.0, kappa = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < nodes.kappa.size(); ++j)
        if (std::abs(r.node_totals[j]) > best) {
            best = std::abs(r.node_totals[j]);
            kappa = nodes.kappa[j];
        }
    return kappa;
}

NodeSet kappa_nodes(const Geometry& g, int n) {
    const QuadratureRule rule = semi_infinite_rule(n, 1.0 / g.gap_width());
    NodeSet s{rule.nodes, rule.weights};
    for (double& w : s.weight) w /= 2.0 * kPi;
    return s;
}

Integrated integrate_zero_temperature(const Geometry& g, const SpectrumSpec& spectrum, Quantity q,
                                      const EnergyOptions& opts) {
    int n = spectrum.n_kappa;
    std::optional<SumResult> prev;
    for (;;) {
        NodeSet nodes = kappa_nodes(g, n);
        SumResult cur = sum_modes(g, nodes, q, spectrum.l, 0, opts);
        if (prev) {
            const double diff = std::abs(cur.value - prev->value);
            const double scale = std::abs(cur.value);
            const double change = scale > 0.0 ? diff / scale : (diff > 0.0 ? INFINITY : 0.0);
            if (change <= spectrum.kappa_tolerance) {
                const double dominant = dominant_node(nodes, cur);
                Integrated out{std::move(cur), std::move(nodes), n, 0, change, dominant};
                out.sum.max_product = std::max(out.sum.max_product, prev->max_product);
                return out;
            }
            if (2 * n > spectrum.n_kappa_max)
                throw ConvergenceError("frequency quadrature not converged with " + std::to_string(n) +
                                       " nodes: relative change " + format_number(change) + " (tolerance " +
                                       format_number(spectrum.kappa_tolerance) + "), l tail " +
                                       format_number(cur.l_tail));
        }
        prev = std::move(cur);
        n *= 2;
    }
}

// Matsubara ladder in blocks of growing size. The half-weighted n = 0 term is
// the two-point extrapolation T/2 [2 f(k_e/2) - f(k_e)], i.e. two extra nodes
// with weights T and -T/2.
Integrated integrate_matsubara(const Geometry& g, const SpectrumSpec& spectrum, Quantity q,
                               const EnergyOptions& opts) {
    const double t = spectrum.temperature;
    const double k_static = kStaticKappa / g.gap_width();
    Integrated out;
    NeumaierSum total, first;
    std::vector<double> ledger;  // by 2 (l - 1) + pol
    double best_node = -1.0;
    long n_next = 0, block = 16;
    int quiet = 0;
    bool done = false;
    while (!done) {
        if (n_next > spectrum.n_max)
            throw ConvergenceError("Matsubara sum not converged within n_max = " + std::to_string(spectrum.n_max) +
                                   " terms; running total " + format_number(total.value()));
        NodeSet nodes;
        std::vector<long> term;
        if (n_next == 0) {
            nodes.add(0.5 * k_static, t);
            nodes.add(k_static, -0.5 * t);
            term = {0, 0};
            n_next = 1;
        }
        const long n_end = std::min(n_next + block, spectrum.n_max + 1);
        for (long n = n_next; n < n_end; ++n) {
            nodes.add(2.0 * kPi * static_cast<double>(n) * t, t);
            term.push_back(n);
        }
        SumResult r = sum_modes(g, nodes, q, spectrum.l, 0, opts);

        for (std::size_t j = 0; j < nodes.kappa.size();) {
            double term_value = 0.0;
            const long n = term[j];
            for (; j < nodes.kappa.size() && term[j] == n; ++j) {
                term_value += r.node_totals[j];
                if (std::abs(r.node_totals[j]) > best_node) {
                    best_node = std::abs(r.node_totals[j]);
                    out.dominant_kappa = nodes.kappa[j];
                }
            }
            total.add(term_value);
            if (n >= 1 && !done) {
                quiet = std::abs(term_value) <= spectrum.matsubara_tolerance * std::abs(total.value()) ? quiet + 1 : 0;
                if (quiet >= spectrum.matsubara_consecutive) done = true;
            }
        }
        first.add(r.first_order);
        if (ledger.size() < r.per_mode.size()) ledger.resize(r.per_mode.size(), 0.0);
        for (std::size_t k = 0; k < r.per_mode.size(); ++k) ledger[k] += r.per_mode[k].value;
        out.sum.l_used = std::max(out.sum.l_used, r.l_used);
        out.sum.l_tail += r.l_tail;
        out.sum.max_product = std::max(out.sum.max_product, r.max_product);
        out.nodes.kappa.insert(out.nodes.kappa.end(), nodes.kappa.begin(), nodes.kappa.end());
        out.nodes.weight.insert(out.nodes.weight.end(), nodes.weight.begin(), nodes.weight.end());
        out.matsubara_terms = n_end;
        n_next = n_end;
        block = std::min(2 * block, 1024L);
    }
    out.sum.value = total.value();
    out.sum.first_order = first.value();
    for (std::size_t k = 0; k < ledger.size(); ++k)
        out.sum.per_mode.push_back({static_cast<int>(k / 2) + 1, k % 2 ? Polarization::TM : Polarization::TE, ledger[k]});
    out.n_kappa = static_cast<int>(out.nodes.kappa.size());
    return out;
}

Integrated integrate(const Geometry& g, const SpectrumSpec& spectrum, Quantity q, const EnergyOptions& opts) {
    return spectrum.mode == SpectrumSpec::Mode::zero_temperature ? integrate_zero_temperature(g, spectrum, q, opts)
                                                                 : integrate_matsubara(g, spectrum, q, opts);
}

PairSign checked_sign(const Geometry& g, const SpectrumSpec& spectrum, const EnergyOptions& opts) {
    g.validate();
    spectrum.validate();
    PairSign s = pair_sign(g);
    if (s.value == Sign::undefined && !opts.allow_undefined_sign)
        throw UndefinedSignError("the sign class of the sphere-wall pair is undefined (s1 = " +
                                 std::to_string(sign_to_int(s.sphere.value)) +
                                 ", s2 = " + std::to_string(sign_to_int(s.wall.value)) +
                                 "); override to compute anyway");
    return s;
}

EnergyReport make_report(const Integrated& in, double factor, const char* quantity, const char* unit,
                         PairSign sign) {
    EnergyReport r;
    r.value = factor * in.sum.value;
    r.quantity = quantity;
    r.unit = unit;
    for (const auto& m : in.sum.per_mode) r.per_mode.push_back({m.l, m.pol, factor * m.value});
    r.l_max_used = in.sum.l_used;
    r.n_kappa_used = in.n_kappa;
    r.sign_class = std::move(sign);
    r.converged = true;
    auto& d = r.diagnostics;
    d.l_tail = std::abs(factor) * in.sum.l_tail;
    d.quadrature_change = in.change;
    d.max_product = in.sum.max_product;
    d.matsubara_terms = in.matsubara_terms;
    d.dominant_kappa = in.dominant_kappa;
    return r;
}

struct FdResult {
    double derivative = 0.0;
    std::vector<ModeContribution> per_mode;
    double max_product = 0.0;
};

// dE/dr1 by central differences at h and h/2 with Richardson's combination;
// nodes and l range are frozen so only r1 moves.
FdResult fd_slope(const Geometry& g, const NodeSet& nodes, int l_max, const EnergyOptions& opts) {
    const double h = 1e-4 * g.gap_width();
    auto at = [&](double dr) {
        Geometry moved = g;
        moved.r1 = g.r1 + dr;
        return sum_modes(moved, nodes, Quantity::value, LPolicy{}, l_max, opts);
    };
    const SumResult a = at(h), b = at(-h), c = at(0.5 * h), e = at(-0.5 * h);
    auto combine = [&](double va, double vb, double vc, double ve) {
        const double d1 = (va - vb) / (2.0 * h);
        const double d2 = (vc - ve) / h;
        return (4.0 * d2 - d1) / 3.0;
    };
    FdResult out;
    out.derivative = combine(a.value, b.value, c.value, e.value);
    for (std::size_t k = 0; k < a.per_mode.size(); ++k)
        out.per_mode.push_back({a.per_mode[k].l, a.per_mode[k].pol,
                                combine(a.per_mode[k].value, b.per_mode[k].value, c.per_mode[k].value,
                                        e.per_mode[k].value)});
    out.max_product = std::max({a.max_product, b.max_product, c.max_product, e.max_product});
    return out;
}

double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

double mode_summand(const Geometry& g, Mode mode, double kappa, const EnergyOptions& opts) {
    g.validate();
    if (!(kappa > 0.0)) throw DomainError("mode_summand: kappa must be positive");
    const double eps_m = permittivity_at(g.gap, kappa);
    const ExteriorAmplitude t1 =
        g.sphere.homogeneous()
            ? mie_exterior(mode, kappa, g.r1, permittivity_at(g.sphere, kappa), eps_m)
            : variable_phase_T(g.sphere, mode, kappa, g.r1, eps_m, opts.variable_phase);
    const InteriorAmplitude t2 =
        mie_interior_cavity(mode, kappa, g.r2, permittivity_at(g.wall, kappa), g.wall.mu(), eps_m);
    if (t1.t.sign == 0 || t2.t.sign == 0) return 0.0;
    const double ab = t1.t.sign * t2.t.sign * std::exp(t1.t.log_abs + t2.t.log_abs);
    if (!(std::abs(ab) < 1.0))
        throw ContractionError("round-trip product " + format_number(ab) + " outside (-1, 1) at l = " +
                                   std::to_string(mode.l) + ", " + polarization_name(mode.pol),
                               ab);
    return (2.0 * mode.l + 1.0) * std::log1p(-ab);
}

double static_limit_summand(const Geometry& g, Mode mode, const EnergyOptions& opts) {
    g.validate();
    const double k = kStaticKappa / g.gap_width();
    const double f_full = mode_summand(g, mode, k, opts);
    const double f_half = mode_summand(g, mode, 0.5 * k, opts);
    const double limit = 2.0 * f_half - f_full;
    if (std::abs(f_full - f_half) > 1e-3 * std::abs(limit) + 1e-20 * (2.0 * mode.l + 1.0))
        throw ConvergenceError("static limit unstable at l = " + std::to_string(mode.l) + ": f(k) = " +
                               format_number(f_full) + ", f(k/2) = " + format_number(f_half));
    return limit;
}

EnergyReport interaction_energy(const Geometry& g, const SpectrumSpec& spectrum, const EnergyOptions& opts) {
    if (spectrum.mode != SpectrumSpec::Mode::zero_temperature)
        throw DomainError("interaction_energy: use matsubara_free_energy for T > 0");
    PairSign sign = checked_sign(g, spectrum, opts);
    const Integrated in = integrate(g, spectrum, Quantity::value, opts);
    EnergyReport r = make_report(in, 1.0, "energy", "1/length", std::move(sign));
    if (in.sum.value != 0.0) r.diagnostics.dilute_ratio = in.sum.first_order / in.sum.value;
    return r;
}

EnergyReport matsubara_free_energy(const Geometry& g, const SpectrumSpec& spectrum, const EnergyOptions& opts) {
    if (spectrum.mode != SpectrumSpec::Mode::matsubara)
        throw DomainError("matsubara_free_energy: spectrum must be of Matsubara kind");
    PairSign sign = checked_sign(g, spectrum, opts);
    const Integrated in = integrate(g, spectrum, Quantity::value, opts);
    EnergyReport r = make_report(in, 1.0, "free_energy", "1/length", std::move(sign));
    if (in.sum.value != 0.0) r.diagnostics.dilute_ratio = in.sum.first_order / in.sum.value;
    return r;
}

EnergyReport interaction_pressure(const Geometry& g, const SpectrumSpec& spectrum, PressureMethod method,
                                  const EnergyOptions& opts) {
    PairSign sign = checked_sign(g, spectrum, opts);
    const double factor = -1.0 / (4.0 * kPi * g.r1 * g.r1);

    if (method == PressureMethod::calogero_analytic) {
        const Integrated in = integrate(g, spectrum, Quantity::slope, opts);
        EnergyReport r = make_report(in, factor, "pressure", "1/length^4", std::move(sign));
        if (opts.cross_check) {
            const FdResult fd = fd_slope(g, in.nodes, in.sum.l_used, opts);
            const double diff = relative_difference(factor * fd.derivative, r.value);
            r.diagnostics.cross_check_difference = diff;
            if (diff > opts.cross_check_tolerance)
                throw CrossValidationError("pressure routes disagree: analytic " + format_number(r.value) +
                                           ", finite difference " + format_number(factor * fd.derivative));
        }
        return r;
    }

    Integrated in = integrate(g, spectrum, Quantity::value, opts);
    const FdResult fd = fd_slope(g, in.nodes, in.sum.l_used, opts);
    const double analytic_check = [&] {
        if (!opts.cross_check) return 0.0;
        return sum_modes(g, in.nodes, Quantity::slope, spectrum.l, in.sum.l_used, opts).value;
    }();
    in.sum.value = fd.derivative;
    in.sum.per_mode = fd.per_mode;
    in.sum.max_product = std::max(in.sum.max_product, fd.max_product);
    EnergyReport r = make_report(in, factor, "pressure", "1/length^4", std::move(sign));
    if (opts.cross_check) {
        const double diff = relative_difference(factor * analytic_check, r.value);
        r.diagnostics.cross_check_difference = diff;
        if (diff > opts.cross_check_tolerance)
            throw CrossValidationError("pressure routes disagree: finite difference " + format_number(r.value) +
                                       ", analytic " + format_number(factor * analytic_check));
    }
    return r;
}

}  // namespace casimir
