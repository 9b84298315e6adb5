#pragma once

// Executes a RunConfig and writes its output files:
//   <dir>/results.csv            one row per sweep point (not for check)
//   <dir>/diagnostics.json       per-point diagnostics, errors and mode ledgers
//   <dir>/planar_convergence.csv radius ladder of planar_limit runs
//   <dir>/check_report.json      theorem reports (check)
//   <dir>/counterexamples/*.ini  replayable configs for failed trials (check)

#include <iosfwd>
#include <string>
#include <vector>

#include "casimir/config.hpp"

namespace casimir {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitUndefinedSign = 2,
    kExitConvergence = 3,
    kExitTheoremFailure = 4,
};

struct RunOptions {
    /// Progress lines go here when set; outputs are unaffected either way.
    std::ostream* progress = nullptr;
};

const std::vector<std::string>& csv_columns();

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Config file that replays one failed trial through the check task.
std::string replay_config(const TheoremReport& report, const Counterexample& failure, const CheckSettings& settings);

int run(const RunConfig& config, const RunOptions& options = {});

}  // namespace casimir
