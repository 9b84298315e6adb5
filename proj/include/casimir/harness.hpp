#pragma once

// Randomised, seed-reproducible checks of the sign and monotonicity theorems.
//
// Trial i of a suite with seed S draws its configuration from a generator seeded
// with seed_seq{S_lo, S_hi, i}, so any trial can be replayed alone from (S, i).
// Draws whose sign class is undefined are skipped and counted; evaluation of the
// accepted draws runs concurrently and the report is assembled in index order.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/energetics.hpp"

namespace casimir {

enum class TheoremId { energy_sign, pressure_sign, t_monotonicity, contraction, a_ell_sign, dlp_sign, magnetodielectric_sign };

const char* theorem_name(TheoremId id);
std::optional<TheoremId> parse_theorem(std::string_view name);
const std::vector<TheoremId>& all_theorems();

/// (eps1 - eps_M)(eps2 - eps_M) l(l+1) / ([l eps1 + (l+1) eps_M][l eps_M + (l+1) eps2]).
double a_ell(int l, double eps1, double eps2, double eps_m);

/// One drawn configuration. Fields beyond the geometry are used by the suites that need them.
struct Trial {
    std::uint64_t index = 0;
    Geometry geometry;
    Sign expected = Sign::undefined;  ///< s = s1 s2, or s1 for t_monotonicity
    Mode mode;                        ///< t_monotonicity, a_ell_sign
    double kappa = 0.0;               ///< t_monotonicity
    std::vector<double> radii;        ///< t_monotonicity sample radii, dlp_sign radius ladder
};

struct Counterexample {
    Trial trial;
    std::string detail;
    double observed = 0.0;
};

struct TheoremReport {
    TheoremId theorem = TheoremId::energy_sign;
    std::uint64_t seed = 0;
    std::uint64_t first_index = 0;
    long trials = 0;   ///< accepted draws evaluated
    long skipped = 0;  ///< draws with undefined sign class
    std::vector<Counterexample> failures;
    double max_product = 0.0;  ///< largest |A B| met by energy and pressure evaluations
    std::vector<std::string> notes;

    bool passed() const { return failures.empty(); }
};

struct HarnessOptions {
    std::uint64_t first_index = 0;
    EnergyOptions energy;
    SpectrumSpec spectrum;
    /// Relative agreement demanded between t_radius_derivative and finite differences.
    double derivative_tolerance = 1e-5;
};

/// Draws trial `index` of a suite; empty when the draw has an undefined sign class.
std::optional<Trial> draw_trial(TheoremId id, std::uint64_t seed, std::uint64_t index);

/// energy_sign, pressure_sign, contraction, a_ell_sign, dlp_sign, magnetodielectric_sign.
TheoremReport run_sign_suite(TheoremId id, long trials, std::uint64_t seed, const HarnessOptions& opts = {});

/// t_radius_derivative against finite differences of mie_exterior at 5 radii per trial.
TheoremReport run_monotonicity_suite(long trials, std::uint64_t seed, const HarnessOptions& opts = {});

/// Dispatches to the two functions above.
TheoremReport run_suite(TheoremId id, long trials, std::uint64_t seed, const HarnessOptions& opts = {});

}  // namespace casimir
