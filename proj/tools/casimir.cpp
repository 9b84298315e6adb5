// casimir: run a configured energy, pressure, planar-limit or theorem-check task.
//
//   casimir --config run.ini [--output DIR] [--seed N] [--lmax N] [--tolerance X] [--quiet]
//
// Exit status: 0 success, 1 configuration error, 2 undefined sign class,
// 3 convergence or contraction failure, 4 theorem counterexample found.

#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "casimir/config.hpp"
#include "casimir/error.hpp"
#include "casimir/runner.hpp"

namespace {

// CASIMIR_THREADS caps the worker count; unset means the OpenMP default.
bool apply_thread_cap() {
    const char* env = std::getenv("CASIMIR_THREADS");
    if (env == nullptr || *env == '\0') return true;
    try {
        std::size_t used = 0;
        const int n = std::stoi(env, &used);
        if (used != std::string(env).size() || n < 1) throw std::invalid_argument(env);
        omp_set_num_threads(n);
        return true;
    } catch (const std::exception&) {
        std::cerr << "casimir: CASIMIR_THREADS must be a positive integer, got '" << env << "'\n";
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir-Lifshitz energy and pressure of a sphere in a spherical cavity"};
    std::string config_path;
    casimir::ConfigOverrides overrides;
    bool quiet = false;
    app.add_option("--config", config_path, "run configuration (INI)")->required();
    app.add_option("--output", overrides.output_dir, "output directory (overrides [output] dir)");
    app.add_option("--seed", overrides.seed, "check task seed");
    app.add_option("--lmax", overrides.l_max, "hard cap on the multipole order")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", overrides.tolerance, "relative tolerance of l, kappa and Matsubara truncation")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "no progress output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : casimir::kExitConfig;
    }
    if (!apply_thread_cap()) return casimir::kExitConfig;

    casimir::RunConfig config;
    try {
        config = casimir::load_config(config_path, overrides);
    } catch (const casimir::ConfigError& e) {
        for (const auto& m : e.messages()) std::cerr << "config: " << m << "\n";
        return casimir::kExitConfig;
    }

    casimir::RunOptions options;
    if (!quiet) options.progress = &std::cerr;
    try {
        const int code = casimir::run(config, options);
        if (!quiet) std::cerr << "casimir: exit " << code << ", outputs in " << config.output.dir << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "casimir: " << e.what() << "\n";
        return casimir::kExitConfig;
    }
}
