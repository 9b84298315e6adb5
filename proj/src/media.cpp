#include "casimir/media.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/detail/format.hpp"
#include "casimir/error.hpp"

namespace casimir {

using detail::format_number;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_number(v[i]);
    }
    return out;
}

}  // namespace

double RadialProfile::value(double r) const {
    if (r >= radii.back()) return eps.back();
    if (interpolation == Interpolation::piecewise_constant) {
        auto it = std::lower_bound(radii.begin(), radii.end(), r);
        return eps[static_cast<std::size_t>(it - radii.begin())];
    }
    auto it = std::upper_bound(radii.begin(), radii.end(), r);
    auto hi = static_cast<std::size_t>(it - radii.begin());
    if (hi == 0) return eps.front();
    const double t = (r - radii[hi - 1]) / (radii[hi] - radii[hi - 1]);
    return eps[hi - 1] + t * (eps[hi] - eps[hi - 1]);
}

std::vector<double> RadialProfile::breakpoints() const {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        if (radii[k] > 0.0) out.push_back(radii[k]);
    return out;
}

double RadialProfile::min_eps() const { return *std::min_element(eps.begin(), eps.end()); }
double RadialProfile::max_eps() const { return *std::max_element(eps.begin(), eps.end()); }

ResponseModel::ResponseModel(Spec spec, double mu) : spec_(std::move(spec)), mu_(mu) {
    require(mu_ > 0.0 && std::isfinite(mu_), "permeability must be positive");
}

ResponseModel ResponseModel::constant(double eps, double mu) {
    require(eps >= 1.0 && std::isfinite(eps), "constant permittivity must be >= 1");
    return ResponseModel(ConstantModel{eps}, mu);
}

ResponseModel ResponseModel::drude(double plasma_frequency, double damping, double mu) {
    require(plasma_frequency >= 0.0, "plasma frequency must be >= 0");
    require(damping >= 0.0, "damping must be >= 0");
    return ResponseModel(DrudeModel{plasma_frequency, damping}, mu);
}

ResponseModel ResponseModel::lorentz(double eps_static, double resonance, double mu) {
    require(eps_static >= 1.0, "static permittivity must be >= 1");
    require(resonance > 0.0, "resonance frequency must be positive");
    return ResponseModel(LorentzModel{eps_static, resonance}, mu);
}

ResponseModel ResponseModel::tabulated(std::vector<double> kappa, std::vector<double> eps, double mu) {
    require(!kappa.empty() && kappa.size() == eps.size(), "tabulated model needs matching non-empty columns");
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        require(kappa[i] > 0.0, "tabulated kappa must be positive");
        require(eps[i] >= 1.0, "tabulated permittivity must be >= 1");
        require(i == 0 || kappa[i] > kappa[i - 1], "tabulated kappa must be strictly increasing");
    }
    return ResponseModel(TabulatedModel{std::move(kappa), std::move(eps)}, mu);
}

ResponseModel ResponseModel::layered(std::vector<double> outer_radii, std::vector<double> eps) {
    require(!outer_radii.empty() && outer_radii.size() == eps.size(), "layered profile needs one eps per layer");
    for (std::size_t i = 0; i < outer_radii.size(); ++i) {
        require(outer_radii[i] > 0.0, "layer radii must be positive");
        require(i == 0 || outer_radii[i] > outer_radii[i - 1], "layer radii must increase");
        require(eps[i] >= 1.0, "layer permittivity must be >= 1");
    }
    return ResponseModel(RadialProfile{std::move(outer_radii), std::move(eps),
                                       RadialProfile::Interpolation::piecewise_constant},
                         1.0);
}

ResponseModel ResponseModel::linear_profile(double radius, double eps_center, double eps_surface) {
    require(radius > 0.0, "profile radius must be positive");
    require(eps_center >= 1.0 && eps_surface >= 1.0, "profile permittivity must be >= 1");
    return ResponseModel(RadialProfile{{0.0, radius}, {eps_center, eps_surface},
                                       RadialProfile::Interpolation::piecewise_linear},
                         1.0);
}

ModelKind ResponseModel::kind() const {
    return std::visit(overloaded{
                          [](const ConstantModel&) { return ModelKind::constant; },
                          [](const DrudeModel&) { return ModelKind::drude; },
                          [](const LorentzModel&) { return ModelKind::lorentz_oscillator; },
                          [](const RadialProfile&) { return ModelKind::radial_profile; },
                          [](const TabulatedModel&) { return ModelKind::tabulated; },
                      },
                      spec_);
}

std::string ResponseModel::kind_name() const {
    switch (kind()) {
        case ModelKind::constant: return "constant";
        case ModelKind::drude: return "drude";
        case ModelKind::lorentz_oscillator: return "lorentz";
        case ModelKind::radial_profile:
            return profile()->interpolation == RadialProfile::Interpolation::piecewise_linear ? "linear_profile"
                                                                                               : "layered";
        case ModelKind::tabulated: return "tabulated";
    }
    return "unknown";
}

std::string ResponseModel::params_string() const {
    std::string out = std::visit(
        overloaded{
            [](const ConstantModel& m) { return "eps=" + format_number(m.eps); },
            [](const DrudeModel& m) {
                return "omega_p=" + format_number(m.plasma_frequency) + ";gamma=" + format_number(m.damping);
            },
            [](const LorentzModel& m) {
                return "eps_static=" + format_number(m.eps_static) + ";omega0=" + format_number(m.resonance);
            },
            [](const RadialProfile& m) { return "radii=" + join_numbers(m.radii) + ";eps=" + join_numbers(m.eps); },
            [](const TabulatedModel& m) { return "kappa=" + join_numbers(m.kappa) + ";eps=" + join_numbers(m.eps); },
        },
        spec_);
    if (mu_ != 1.0) out += ";mu=" + format_number(mu_);
    return out;
}

double permittivity_at(const ResponseModel& model, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("permittivity_at: kappa must be positive");
    return std::visit(
        overloaded{
            [](const ConstantModel& m) { return m.eps; },
            [kappa](const DrudeModel& m) {
                return 1.0 + m.plasma_frequency * m.plasma_frequency / (kappa * (kappa + m.damping));
            },
            [kappa](const LorentzModel& m) {
                const double q = kappa / m.resonance;
                return 1.0 + (m.eps_static - 1.0) / (1.0 + q * q);
            },
            [](const RadialProfile& m) { return m.eps.back(); },
            [kappa](const TabulatedModel& m) {
                if (kappa <= m.kappa.front()) return m.eps.front();
                if (kappa >= m.kappa.back()) return m.eps.back();
                auto it = std::upper_bound(m.kappa.begin(), m.kappa.end(), kappa);
                auto hi = static_cast<std::size_t>(it - m.kappa.begin());
                const double t = std::log(kappa / m.kappa[hi - 1]) / std::log(m.kappa[hi] / m.kappa[hi - 1]);
                return std::exp(std::log(m.eps[hi - 1]) + t * std::log(m.eps[hi] / m.eps[hi - 1]));
            },
        },
        model.spec());
}

double permittivity_profile_at(const ResponseModel& model, double kappa, double r) {
    if (!(kappa > 0.0)) throw DomainError("permittivity_profile_at: kappa must be positive");
    const RadialProfile* p = model.profile();
    if (p == nullptr) {
        if (r < 0.0) throw DomainError("permittivity_profile_at: r must be >= 0");
        return permittivity_at(model, kappa);
    }
    if (r < 0.0 || r > p->support_radius())
        throw DomainError("permittivity_profile_at: r outside [0, " + format_number(p->support_radius()) + "]");
    return p->value(r);
}

int sign_to_int(Sign s) {
    switch (s) {
        case Sign::plus: return 1;
        case Sign::minus: return -1;
        case Sign::undefined: return 0;
    }
    return 0;
}

Sign sign_product(Sign a, Sign b) {
    if (a == Sign::undefined || b == Sign::undefined) return Sign::undefined;
    return a == b ? Sign::plus : Sign::minus;
}

Sign flip(Sign s) {
    if (s == Sign::plus) return Sign::minus;
    if (s == Sign::minus) return Sign::plus;
    return Sign::undefined;
}

SignGrid default_sign_grid(const ResponseModel& body, double r1, double r2) {
    if (!(r2 > r1)) throw DomainError("default_sign_grid: need r2 > r1");
    SignGrid grid;
    const double scale = 1.0 / (r2 - r1);
    constexpr int n_kappa = 64;
    for (int i = 0; i < n_kappa; ++i) {
        const double e = -3.0 + 6.0 * i / (n_kappa - 1);
        grid.kappa.push_back(scale * std::pow(10.0, e));
    }
    if (const RadialProfile* p = body.profile()) {
        constexpr int per_layer = 32;
        double lo = 0.0;
        for (double hi : p->radii) {
            if (hi <= lo) continue;
            for (int j = 0; j < per_layer; ++j) grid.r.push_back(lo + (hi - lo) * j / (per_layer - 1));
            lo = hi;
        }
    } else {
        grid.r.push_back(0.0);
    }
    return grid;
}

SignClass classify_sign(const ResponseModel& body, const ResponseModel& medium, std::span<const double> kappa_grid,
                        std::span<const double> r_grid) {
    if (!medium.homogeneous()) throw DomainError("classify_sign: medium must be homogeneous");
    if (kappa_grid.empty()) throw DomainError("classify_sign: empty kappa grid");

    SignClass out;
    const bool profile = !body.homogeneous();
    if (profile && r_grid.empty()) throw DomainError("classify_sign: empty r grid for a radial profile");

    bool all_above = true;
    bool all_below = true;
    const double mu_b = body.mu();
    const double mu_m = medium.mu();
    if (mu_b > mu_m) all_above = false;
    if (mu_b < mu_m) all_below = false;

    for (double kappa : kappa_grid) {
        const double em = permittivity_at(medium, kappa);
        auto visit_point = [&](double r, double eb) {
            out.witnesses.push_back({kappa, r});
            if (!(eb > em)) all_above = false;
            if (!(eb < em)) all_below = false;
        };
        if (profile) {
            for (double r : r_grid) visit_point(r, permittivity_profile_at(body, kappa, r));
        } else {
            visit_point(r_grid.empty() ? 0.0 : r_grid.front(), permittivity_at(body, kappa));
        }
    }
    out.value = all_above ? Sign::plus : (all_below ? Sign::minus : Sign::undefined);
    return out;
}

}  // namespace casimir
