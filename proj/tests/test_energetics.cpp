#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <omp.h>

#include "casimir/energetics.hpp"
#include "casimir/error.hpp"
#include "boundary_oracle.hpp"

using namespace casimir;

namespace {

constexpr double kPi = std::numbers::pi;

Geometry constant_pair(double r1, double r2, double eps1, double eps2, double eps_m, double mu2 = 1.0) {
    return {r1, r2, ResponseModel::constant(eps1), ResponseModel::constant(eps2, mu2), ResponseModel::constant(eps_m)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

TEST_SUITE("energetics") {

TEST_CASE("mode summand agrees with boundary matching") {
    const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
    for (Polarization p : {Polarization::TE, Polarization::TM})
        for (int l : {1, 4}) {
            const double ab = oracle::exterior_A({l, p}, 1.0, {{1.0, 2.0}}, 1.0) *
                              oracle::interior_B({l, p}, 1.0, 2.0, 3.0, 1.0, 1.0);
            const double expect = (2.0 * l + 1.0) * std::log1p(-ab);
            const double got = mode_summand(g, {l, p}, 1.0);
            CHECK(got < 0.0);
            CHECK(rel(got, expect) < 1e-10);
        }
}

TEST_CASE("index-matched sphere gives zero interaction") {
    const Geometry g = constant_pair(1.0, 2.0, 1.5, 3.0, 1.5);
    CHECK(mode_summand(g, {1, Polarization::TM}, 0.7) == 0.0);
    CHECK(static_limit_summand(g, {2, Polarization::TM}) == 0.0);
    EnergyOptions o;
    o.allow_undefined_sign = true;
    CHECK(interaction_energy(g, {}, o).value == 0.0);
    CHECK(interaction_pressure(g, {}, PressureMethod::calogero_analytic, o).value == 0.0);
    CHECK_THROWS_AS(interaction_energy(g), UndefinedSignError);
}

TEST_CASE("signs follow the sign class") {
    SUBCASE("s = +1") {
        const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
        CHECK(pair_sign(g).value == Sign::plus);
        CHECK(interaction_energy(g).value < 0.0);
        CHECK(interaction_pressure(g).value > 0.0);
        CHECK(mode_summand(g, {3, Polarization::TE}, 0.2) < 0.0);
    }
    SUBCASE("s = -1, medium between the bodies") {
        const Geometry g = constant_pair(1.0, 2.0, 1.2, 3.0, 2.0);
        CHECK(pair_sign(g).value == Sign::minus);
        CHECK(interaction_energy(g).value > 0.0);
        CHECK(interaction_pressure(g).value < 0.0);
        CHECK(mode_summand(g, {3, Polarization::TM}, 0.2) > 0.0);
    }
    SUBCASE("magnetodielectric wall") {
        const Geometry g = constant_pair(1.0, 2.0, 1.5, 1.2, 2.0, 3.0);
        CHECK(pair_sign(g).value == Sign::plus);
        CHECK(interaction_energy(g).value < 0.0);
        CHECK(interaction_pressure(g).value > 0.0);
    }
}

TEST_CASE("report ledger sums to the value") {
    const EnergyReport e = interaction_energy(constant_pair(1.0, 2.0, 2.0, 3.0, 1.0));
    double sum = 0.0;
    for (const auto& m : e.per_mode) sum += m.value;
    CHECK(rel(sum, e.value) < 1e-12);
    CHECK(e.converged);
    CHECK(e.l_max_used > 0);
    CHECK(e.n_kappa_used >= 64);
    CHECK(e.diagnostics.max_product < 1.0);
    CHECK(e.unit == "1/length");
}

TEST_CASE("parallel kernel reproduces the reference kernel") {
    for (const Geometry& g : {constant_pair(1.0, 2.0, 2.0, 3.0, 1.0), constant_pair(0.8, 1.5, 1.2, 1.5, 2.0, 2.5)}) {
        EnergyOptions ref;
        ref.kernel = Kernel::reference;
        CHECK(rel(interaction_energy(g).value, interaction_energy(g, {}, ref).value) < 1e-12);
        CHECK(rel(interaction_pressure(g).value,
                  interaction_pressure(g, {}, PressureMethod::calogero_analytic, ref).value) < 1e-10);
    }
}

TEST_CASE("results do not depend on the worker count") {
    const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = interaction_pressure(g).value;
    omp_set_num_threads(4);
    const double four = interaction_pressure(g).value;
    omp_set_num_threads(saved);
    CHECK(one == four);
}

TEST_CASE("finite-difference and analytic pressures agree") {
    for (const Geometry& g : {constant_pair(1.0, 2.0, 2.0, 3.0, 1.0), constant_pair(0.5, 1.0, 1.2, 3.0, 2.0),
                              constant_pair(1.0, 1.6, 4.0, 1.3, 2.0, 2.0)}) {
        const double fd = interaction_pressure(g, {}, PressureMethod::finite_difference).value;
        const double an = interaction_pressure(g, {}, PressureMethod::calogero_analytic).value;
        CHECK(rel(fd, an) < 1e-4);
    }
    EnergyOptions o;
    o.cross_check = true;
    const EnergyReport p = interaction_pressure(constant_pair(1.0, 2.0, 2.0, 3.0, 1.0), {}, PressureMethod::calogero_analytic, o);
    CHECK(p.diagnostics.cross_check_difference < 1e-4);
}

TEST_CASE("energy is monotone in the sphere radius") {
    for (const auto& [eps1, eps2, eps_m] : {std::array{2.0, 3.0, 1.0}, std::array{1.2, 3.0, 2.0}}) {
        double prev = 0.0;
        int s = 0;
        for (double r1 : {0.6, 0.8, 1.0, 1.2, 1.4}) {
            const Geometry g = constant_pair(r1, 2.0, eps1, eps2, eps_m);
            s = sign_to_int(pair_sign(g).value);
            const double e = interaction_energy(g).value;
            if (r1 > 0.6) CHECK(sign_of(e - prev) == -s);
            prev = e;
        }
    }
}

TEST_CASE("static limit reproduces the closed form") {
    const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
    for (int l : {1, 2, 5}) {
        const double a = (2.0 - 1.0) * (3.0 - 1.0) * l * (l + 1.0) / ((l * 2.0 + (l + 1.0)) * (l + 3.0 * (l + 1.0)));
        const double expect = (2.0 * l + 1.0) * std::log1p(-a * std::pow(0.5, 2 * l + 1));
        const double got = static_limit_summand(g, {l, Polarization::TM});
        CHECK(got < 0.0);
        CHECK(rel(got, expect) < 1e-6);
        CHECK(std::abs(static_limit_summand(g, {l, Polarization::TE})) < 1e-9 * std::abs(expect));
    }
}

TEST_CASE("free energy approaches the zero-temperature energy") {
    const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
    const double e = interaction_energy(g).value;
    const EnergyReport f = matsubara_free_energy(g, SpectrumSpec::matsubara(1e-3));
    CHECK(rel(f.value, e) < 1e-2);
    CHECK(f.diagnostics.matsubara_terms > 0);
    const double p0 = interaction_pressure(g).value;
    CHECK(rel(interaction_pressure(g, SpectrumSpec::matsubara(1e-3)).value, p0) < 1e-2);
}

TEST_CASE("thermal signs follow the sign class") {
    for (const Geometry& g : {constant_pair(1.0, 2.0, 2.0, 3.0, 1.0), constant_pair(1.0, 2.0, 1.2, 3.0, 2.0)}) {
        const int s = sign_to_int(pair_sign(g).value);
        for (double t : {0.01, 0.1, 1.0}) {
            CHECK(sign_of(matsubara_free_energy(g, SpectrumSpec::matsubara(t)).value) == -s);
            CHECK(sign_of(interaction_pressure(g, SpectrumSpec::matsubara(t)).value) == s);
        }
    }
}

TEST_CASE("high temperature is dominated by the static term") {
    const Geometry g = constant_pair(1.0, 2.0, 2.0, 3.0, 1.0);
    const double t = 5.0;
    const EnergyReport f = matsubara_free_energy(g, SpectrumSpec::matsubara(t));
    double n0 = 0.0;
    for (int l = 1; l <= f.l_max_used; ++l)
        for (Polarization p : {Polarization::TE, Polarization::TM}) n0 += 0.5 * t * static_limit_summand(g, {l, p});
    CHECK(std::abs(f.value - n0) / std::abs(f.value) <= 1e-3);
}

TEST_CASE("truncation failures are reported") {
    SpectrumSpec s;
    s.l.l_max = 3;
    CHECK_THROWS_AS(interaction_energy(constant_pair(1.8, 2.0, 2.0, 3.0, 1.0), s), ConvergenceError);
    CHECK_THROWS_AS(matsubara_free_energy(constant_pair(1.0, 2.0, 2.0, 3.0, 1.0), SpectrumSpec::matsubara(0.0)),
                    DomainError);
    CHECK_THROWS_AS(interaction_energy(constant_pair(2.0, 1.0, 2.0, 3.0, 1.0)), DomainError);
}

TEST_CASE("dilute self-energy") {
    CHECK(dilute_self_energy(1.0, 1.0).value == 0.0);
    const double v = dilute_self_energy(1.1, 1.0).value;
    CHECK(rel(v, 23.0 * 0.01 / (1536.0 * kPi)) < 1e-12);
    CHECK(rel(v, 4.7664e-5) < 1e-4);
    CHECK(rel(dilute_self_energy(1.1, 2.0).value, 0.5 * v) < 1e-14);
    CHECK(rel(dilute_self_energy(1.1, 1.0).pressure, 23.0 * 0.01 / (6144.0 * kPi * kPi)) < 1e-12);
    CHECK(dilute_self_energy(1.1, 1.0).warnings.empty());
    CHECK(dilute_self_energy(1.5, 1.0).warnings.size() == 1);
}

TEST_CASE("dilute self free energy") {
    CHECK(rel(dilute_self_free_energy(1.1, 1.0, 0.0).value, dilute_self_energy(1.1, 1.0).value) < 1e-15);
    // 0.01 [23/(1536 pi) + (7/270) pi^3 1e-4]
    const double expect = 0.01 * (23.0 / (1536.0 * kPi) + 7.0 / 270.0 * kPi * kPi * kPi * 1e-4);
    const SelfTerm f = dilute_self_free_energy(1.1, 1.0, 0.1);
    CHECK(rel(f.value, expect) < 1e-12);
    CHECK(rel(f.value, 4.8468e-5) < 1e-4);
    CHECK(f.pressure > 0.0);
    CHECK(dilute_self_free_energy(1.1, 1.0, 0.5).warnings.size() == 1);

    for (double r1 : {0.5, 1.0, 3.0}) {
        const double tc = self_pressure_crossover_temperature(r1);
        const double closed = std::pow(23.0 * 90.0 / (1536.0 * 7.0 * std::pow(kPi, 4)), 0.25) / r1;
        CHECK(rel(tc, closed) < 1e-12);
        CHECK(dilute_self_free_energy(1.1, r1, 0.9 * tc).pressure > 0.0);
        CHECK(dilute_self_free_energy(1.1, r1, 1.1 * tc).pressure < 0.0);
    }
}

TEST_CASE("total pressure of a dilute sphere") {
    const EnergyReport p = total_pressure(constant_pair(1.0, 2.0, 1.1, 3.0, 1.0));
    CHECK(p.value > 0.0);
    REQUIRE(p.parts.size() == 2);
    CHECK(rel(p.parts[0].second + p.parts[1].second, p.value) < 1e-14);
    CHECK(p.parts[1].second == dilute_self_energy(1.1, 1.0).pressure);
    CHECK_THROWS_AS(total_pressure(constant_pair(1.0, 2.0, 1.1, 3.0, 1.5)), DomainError);
}

TEST_CASE("Lifshitz half-space pressure") {
    // Perfect mirrors: -pi^2 / (240 d^4), approached as 1/sqrt(eps).
    CHECK(rel(lifshitz_planar_pressure(1.0, 1e10, 1e10, 1.0), -kPi * kPi / 240.0) < 1e-3);
    CHECK(rel(lifshitz_planar_pressure(2.0, 3.0, 4.0, 1.0), lifshitz_planar_pressure(1.0, 3.0, 4.0, 1.0) / 16.0) < 1e-10);
    CHECK(lifshitz_planar_pressure(1.0, 1.2, 3.0, 2.0) > 0.0);
    CHECK(lifshitz_planar_pressure(1.0, 2.0, 2.0, 2.0) == 0.0);
}

TEST_CASE("planar limit reproduces the half-space result") {
    const PlanarResult att = planar_limit_force(1.0, 2.0, 3.0, 1.0, {10.0, 30.0, 100.0});
    CHECK(att.sign == -1);
    CHECK(rel(att.extrapolated, att.lifshitz_reference) < 1e-3);
    CHECK(att.table.size() == 3);
    const PlanarResult rep = planar_limit_force(1.0, 1.2, 3.0, 2.0, {10.0, 30.0, 100.0});
    CHECK(rep.sign == 1);
    CHECK(rel(rep.extrapolated, rep.lifshitz_reference) < 1e-2);
    CHECK_THROWS_AS(planar_limit_force(1.0, 2.0, 3.0, 1.0, {10.0}), ConvergenceError);
    CHECK_THROWS_AS(planar_limit_force(1.0, 2.0, 3.0, 1.0, {30.0, 10.0}), DomainError);
}

}  // TEST_SUITE
