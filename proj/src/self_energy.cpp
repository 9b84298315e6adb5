#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include <boost/math/tools/roots.hpp>

#include "casimir/detail/format.hpp"
#include "casimir/energetics.hpp"
#include "casimir/error.hpp"

namespace casimir {

using detail::format_number;

namespace {

constexpr double kPi = std::numbers::pi;

void check_dilute_args(double eps1, double r1) {
    if (!(eps1 >= 1.0) || !std::isfinite(eps1)) throw DomainError("dilute self-energy: eps1 must be >= 1");
    if (!(r1 > 0.0) || !std::isfinite(r1)) throw DomainError("dilute self-energy: r1 must be positive");
}

void gate_contrast(double eps1, const DiluteGates& gates, std::vector<std::string>& warnings) {
    if (std::abs(eps1 - 1.0) > gates.max_contrast)
        warnings.push_back("dilute expansion outside its gate: |eps1 - 1| = " + format_number(std::abs(eps1 - 1.0)) +
                           " > " + format_number(gates.max_contrast));
}

// d/dr1 of the bracket in the two-term free energy.
double free_energy_bracket_slope(double r1, double t) {
    return -23.0 / (1536.0 * kPi * r1 * r1) + 7.0 / 90.0 * kPi * kPi * kPi * r1 * r1 * t * t * t * t;
}

}  // namespace

SelfTerm dilute_self_energy(double eps1, double r1, const DiluteGates& gates) {
    check_dilute_args(eps1, r1);
    const double c = (eps1 - 1.0) * (eps1 - 1.0);
    SelfTerm s;
    s.value = 23.0 * c / (1536.0 * kPi * r1);
    s.pressure = 23.0 * c / (6144.0 * kPi * kPi * r1 * r1 * r1 * r1);
    gate_contrast(eps1, gates, s.warnings);
    return s;
}

SelfTerm dilute_self_free_energy(double eps1, double r1, double temperature, const DiluteGates& gates) {
    check_dilute_args(eps1, r1);
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw DomainError("dilute self free energy: temperature must be >= 0");
    const double c = (eps1 - 1.0) * (eps1 - 1.0);
    const double pr = kPi * r1;
    const double t4 = temperature * temperature * temperature * temperature;
    SelfTerm s;
    s.value = c * (23.0 / (1536.0 * kPi * r1) + 7.0 / 270.0 * pr * pr * pr * t4);
    s.pressure = -c * free_energy_bracket_slope(r1, temperature) / (4.0 * kPi * r1 * r1);
    gate_contrast(eps1, gates, s.warnings);
    if (temperature * r1 > gates.max_temperature_radius)
        s.warnings.push_back("low-temperature expansion outside its gate: T r1 = " + format_number(temperature * r1) +
                             " > " + format_number(gates.max_temperature_radius));
    return s;
}

double self_pressure_crossover_temperature(double r1) {
    if (!(r1 > 0.0)) throw DomainError("crossover: r1 must be positive");
    auto f = [r1](double t) { return free_energy_bracket_slope(r1, t); };
    boost::math::tools::eps_tolerance<double> tol(52);
    boost::uintmax_t iterations = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, 1.0 / r1, tol, iterations);
    return 0.5 * (lo + hi);
}

EnergyReport total_pressure(const Geometry& g, const SpectrumSpec& spectrum, PressureMethod method,
                            const EnergyOptions& opts, const DiluteGates& gates) {
    g.validate();
    const auto* gap = std::get_if<ConstantModel>(&g.gap.spec());
    if (gap == nullptr || gap->eps != 1.0)
        throw DomainError("total_pressure: the dilute self term is only known for a vacuum gap");
    const auto* sphere = std::get_if<ConstantModel>(&g.sphere.spec());
    if (sphere == nullptr) throw DomainError("total_pressure: the dilute self term needs a constant sphere permittivity");

    EnergyReport r = interaction_pressure(g, spectrum, method, opts);
    const bool thermal = spectrum.mode == SpectrumSpec::Mode::matsubara;
    const SelfTerm self = thermal ? dilute_self_free_energy(sphere->eps, g.r1, spectrum.temperature, gates)
                                  : dilute_self_energy(sphere->eps, g.r1, gates);
    r.parts = {{"interaction", r.value}, {"self", self.pressure}};
    r.value += self.pressure;
    r.quantity = "total_pressure";
    for (const auto& w : self.warnings) r.diagnostics.warnings.push_back(w);
    return r;
}

}  // namespace casimir
