#pragma once

// Interaction energy, free energy and surface pressures of a sphere (radius r1)
// concentric with a spherical cavity (inner radius r2).
//
//   E_int = (1/2 pi) sum_{l,P} int_0^inf dkappa (2l+1) ln(1 - A_l^P B_l^P)
//   F_int = T sum'_n sum_{l,P} (2l+1) ln(1 - A B)|_{kappa_n = 2 pi n T}, n = 0 half-weighted
//   <p_int> = -(1 / 4 pi r1^2) dE_int/dr1   (virtual dilation of the sphere, r2 fixed)
//
// Energies are in inverse length, pressures in inverse length^4 (hbar = c = k_B = 1).

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "casimir/media.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

struct Geometry {
    double r1 = 1.0;
    double r2 = 2.0;
    ResponseModel sphere;
    ResponseModel wall;
    ResponseModel gap;

    double gap_width() const { return r2 - r1; }
    /// Throws DomainError unless 0 < r1 < r2, the gap is homogeneous and the sphere and gap are nonmagnetic.
    void validate() const;
};

/// l-sum truncation: stop once `consecutive` orders in a row each add less than
/// `tolerance` of the running total; fail at `l_max`.
struct LPolicy {
    double tolerance = 1e-9;
    int consecutive = 3;
    int l_max = 200;
};

struct SpectrumSpec {
    enum class Mode { zero_temperature, matsubara };

    Mode mode = Mode::zero_temperature;
    // zero temperature: Gauss-Legendre in u with kappa = u / ((1 - u)(r2 - r1)),
    // doubled from n_kappa until the relative change is at most kappa_tolerance.
    int n_kappa = 64;
    int n_kappa_max = 4096;
    double kappa_tolerance = 1e-8;
    // Matsubara: stop after `matsubara_consecutive` terms each below
    // matsubara_tolerance of the running total; fail past n_max.
    double temperature = 0.0;
    double matsubara_tolerance = 1e-9;
    int matsubara_consecutive = 3;
    long n_max = 100000;
    LPolicy l;

    static SpectrumSpec zero_temperature() { return {}; }
    static SpectrumSpec matsubara(double temperature);
    void validate() const;
};

enum class PressureMethod { finite_difference, calogero_analytic };
enum class Kernel { parallel, reference };

struct EnergyOptions {
    /// Compute even when the sign class of the pair is undefined.
    bool allow_undefined_sign = false;
    Kernel kernel = Kernel::parallel;
    VariablePhaseOptions variable_phase;
    /// Pressures: evaluate both routes and throw CrossValidationError when they
    /// differ by more than cross_check_tolerance (relative).
    bool cross_check = false;
    double cross_check_tolerance = 1e-4;
};

struct PairSign {
    SignClass sphere;  ///< s1: sphere against the gap medium
    SignClass wall;    ///< s2: wall against the gap medium
    Sign value = Sign::undefined;  ///< s = s1 s2
};

/// Sign classes on the default grids of default_sign_grid.
PairSign pair_sign(const Geometry& g);

struct ModeContribution {
    int l = 0;
    Polarization pol = Polarization::TE;
    double value = 0.0;
};

struct Diagnostics {
    double l_tail = 0.0;             ///< geometric estimate of the omitted l tail (absolute)
    double quadrature_change = 0.0;  ///< relative change at the last quadrature refinement
    double max_product = 0.0;        ///< largest |A B| met
    double dilute_ratio = std::numeric_limits<double>::quiet_NaN();  ///< first-order term / full log
    double dominant_kappa = std::numeric_limits<double>::quiet_NaN();
    long matsubara_terms = 0;
    double cross_check_difference = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

struct EnergyReport {
    double value = 0.0;
    std::string quantity;
    std::string unit;
    /// Contribution of each (l, P), integrated over frequency; sums to value
    /// (to the interaction part of value for total_pressure).
    std::vector<ModeContribution> per_mode;
    /// Named additive parts, e.g. self and interaction pressure.
    std::vector<std::pair<std::string, double>> parts;
    int l_max_used = 0;
    int n_kappa_used = 0;
    PairSign sign_class;
    bool converged = false;
    Diagnostics diagnostics;
};

/// (2l+1) ln(1 - A B) for one mode through the per-mode amplitude API.
double mode_summand(const Geometry& g, Mode mode, double kappa, const EnergyOptions& opts = {});

/// kappa -> 0 limit of mode_summand from kappa_e = 1e-6 / (r2 - r1) and kappa_e / 2,
/// linearly extrapolated.
double static_limit_summand(const Geometry& g, Mode mode, const EnergyOptions& opts = {});

EnergyReport interaction_energy(const Geometry& g, const SpectrumSpec& spectrum = {}, const EnergyOptions& opts = {});

/// Zero-temperature or thermal pressure depending on spectrum.mode.
EnergyReport interaction_pressure(const Geometry& g, const SpectrumSpec& spectrum = {},
                                  PressureMethod method = PressureMethod::calogero_analytic,
                                  const EnergyOptions& opts = {});

EnergyReport matsubara_free_energy(const Geometry& g, const SpectrumSpec& spectrum, const EnergyOptions& opts = {});

// ---- dilute self-energy of the sphere (vacuum surroundings) ----

struct DiluteGates {
    double max_contrast = 0.3;             ///< |eps1 - 1|
    double max_temperature_radius = 0.2;   ///< T r1
};

struct SelfTerm {
    double value = 0.0;     ///< energy or free energy
    double pressure = 0.0;  ///< -(1 / 4 pi r1^2) d(value)/dr1
    std::vector<std::string> warnings;
};

/// 23 (eps1 - 1)^2 / (1536 pi r1).
SelfTerm dilute_self_energy(double eps1, double r1, const DiluteGates& gates = {});

/// (eps1 - 1)^2 [23 / (1536 pi r1) + (7/270) (pi r1)^3 T^4].
SelfTerm dilute_self_free_energy(double eps1, double r1, double temperature, const DiluteGates& gates = {});

/// Temperature at which the dilute self-pressure of a sphere of radius r1 changes sign.
double self_pressure_crossover_temperature(double r1);

/// Interaction pressure plus the dilute self-pressure. Needs a vacuum gap and a
/// constant sphere permittivity; the gates only add warnings.
EnergyReport total_pressure(const Geometry& g, const SpectrumSpec& spectrum = {},
                            PressureMethod method = PressureMethod::calogero_analytic,
                            const EnergyOptions& opts = {}, const DiluteGates& gates = {});

// ---- planar limit ----

struct PlanarRow {
    double r1 = 0.0;
    double force = 0.0;  ///< per unit area, positive = repulsive (gap-widening)
    int l_max_used = 0;
    int n_kappa_used = 0;
};

struct PlanarResult {
    double extrapolated = 0.0;
    int sign = 0;
    std::vector<PlanarRow> table;
    double lifshitz_reference = 0.0;  ///< half-space formula at the same d
    double max_product = 0.0;         ///< largest |A B| over the ladder
    std::string fit;
};

struct PlanarOptions {
    int l_max = 9000;
    SpectrumSpec spectrum;
    EnergyOptions energy;
};

/// Force per unit area -<p_int> along a ladder of sphere radii at fixed gap d,
/// extrapolated to r1 -> infinity by a quadratic in d/r1 through the three largest radii.
PlanarResult planar_limit_force(double d, double eps1, double eps2, double eps_m, const std::vector<double>& radius_ladder,
                                const PlanarOptions& opts = {});

/// Zero-temperature pressure between two half-spaces (eps1 | eps_m, gap d | eps2, mu2),
/// positive = repulsive.
double lifshitz_planar_pressure(double d, double eps1, double eps2, double eps_m, double mu2 = 1.0);

}  // namespace casimir
