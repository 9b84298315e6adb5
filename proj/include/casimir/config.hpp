#pragma once

// Run configuration: a sectioned key = value document (INI dialect), validated
// in full before anything is computed. The grammar is documented in README.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casimir/energetics.hpp"
#include "casimir/harness.hpp"

namespace casimir {

enum class Task { energy, pressure, total_pressure, free_energy, planar_limit, check };

const char* task_name(Task t);

struct SweepAxis {
    std::string path;  ///< "section.key", e.g. "geometry.r1" or "medium:glass.eps"
    double from = 0.0;
    double to = 0.0;
    int points = 1;
    bool log_scale = false;

    std::vector<double> values() const;
};

struct PlanarSettings {
    double d = 0.0;
    std::vector<double> ladder;  ///< sphere radii in units of d
    int l_max = 9000;
};

/// One fully resolved sweep point.
struct PointConfig {
    std::vector<std::pair<std::string, double>> coordinates;  ///< swept path -> value
    Geometry geometry;
    SpectrumSpec spectrum;
    EnergyOptions energy;
    PressureMethod method = PressureMethod::calogero_analytic;
    DiluteGates gates;
    PlanarSettings planar;
};

struct CheckSettings {
    std::vector<TheoremId> theorems;
    long trials = 100;
    std::uint64_t seed = 0;
    std::uint64_t first_index = 0;
    double derivative_tolerance = 1e-5;
    SpectrumSpec spectrum;  ///< zero temperature; truncation settings for the energy and pressure suites
};

struct OutputSettings {
    std::string dir = "casimir_out";
    std::string csv = "results.csv";
    std::string diagnostics = "diagnostics.json";
};

struct RunConfig {
    Task task = Task::energy;
    std::vector<SweepAxis> sweep;
    std::vector<PointConfig> plan;  ///< one entry per sweep point, first axis outermost; empty for check
    CheckSettings check;
    OutputSettings output;
};

/// Command-line values that take precedence over the document.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> l_max;
    std::optional<double> tolerance;  ///< l-tail, kappa-refinement and Matsubara tolerances
    std::optional<std::string> output_dir;
};

/// Throws ConfigError listing every problem found.
RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// [medium:NAME] section that parse_config reads back into `model`.
std::string medium_section(const std::string& name, const ResponseModel& model);

}  // namespace casimir
