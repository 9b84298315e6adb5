#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "casimir/config.hpp"
#include "casimir/runner.hpp"

using namespace casimir;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("casimir_runner_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

int run_text(const std::string& text, const fs::path& dir) {
    ConfigOverrides o;
    o.output_dir = dir.string();
    return run(parse_config(text, o));
}

const char* kPressure = "[geometry]\nr1 = 1\nr2 = 2\nsphere = 2\nwall = 3\ngap = 1\n[task]\ntype = pressure\n";

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("CSV quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    CHECK(csv_columns().front() == "task");
    CHECK(csv_columns().back() == "converged");
    CHECK(csv_columns().size() == 17);
}

TEST_CASE("single point writes CSV and diagnostics") {
    const fs::path dir = scratch_dir("single");
    REQUIRE(run_text(kPressure, dir) == kExitOk);
    const std::string csv = slurp(dir / "results.csv");
    CHECK(count_lines(csv) == 2);
    CHECK(csv.find("\r\n") != std::string::npos);
    CHECK(csv.find("pressure,1,2,constant") != std::string::npos);
    CHECK(csv.find(",+1,") != std::string::npos);

    const auto diag = nlohmann::json::parse(slurp(dir / "diagnostics.json"));
    CHECK(diag["exit_code"] == 0);
    REQUIRE(diag["points"].size() == 1);
    const auto& point = diag["points"][0];
    CHECK(point["status"] == "ok");
    CHECK(point["sign_class"]["pair"] == "+1");
    CHECK(point["result"]["value"].get<double>() > 0.0);
    CHECK(point["result"]["converged"] == true);
    fs::remove_all(dir);
}

TEST_CASE("sweep writes one row per point") {
    const fs::path dir = scratch_dir("sweep");
    const std::string text = std::string(kPressure) +
                             "[sweep]\nparam1 = geometry.r1\nfrom1 = 0.6\nto1 = 1.4\npoints1 = 5\n";
    REQUIRE(run_text(text, dir) == kExitOk);
    CHECK(count_lines(slurp(dir / "results.csv")) == 6);
    fs::remove_all(dir);
}

TEST_CASE("undefined sign exits 2 and keeps the row") {
    const fs::path dir = scratch_dir("undefined");
    const std::string text = "[geometry]\nr1 = 1\nr2 = 2\nsphere = 1.5\nwall = 3\ngap = 1.5\n[task]\ntype = energy\n";
    CHECK(run_text(text, dir) == kExitUndefinedSign);
    const std::string csv = slurp(dir / "results.csv");
    CHECK(count_lines(csv) == 2);
    CHECK(csv.find("nan") != std::string::npos);
    CHECK(csv.find("undefined") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("truncation failure exits 3") {
    const fs::path dir = scratch_dir("truncation");
    CHECK(run_text(std::string(kPressure) + "[spectrum]\nl_max = 3\n", dir) == kExitConvergence);
    fs::remove_all(dir);
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path a = scratch_dir("repeat_a"), b = scratch_dir("repeat_b");
    const std::string text = std::string(kPressure) +
                             "[sweep]\nparam1 = geometry.r1\nfrom1 = 0.6\nto1 = 1.4\npoints1 = 3\n";
    REQUIRE(run_text(text, a) == kExitOk);
    REQUIRE(run_text(text, b) == kExitOk);
    CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
    CHECK(slurp(a / "diagnostics.json") == slurp(b / "diagnostics.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("planar limit writes the radius ladder") {
    const fs::path dir = scratch_dir("planar");
    const std::string text = "[geometry]\nr1 = 1\nr2 = 2\nsphere = 2\nwall = 3\ngap = 1\n[task]\ntype = "
                             "planar_limit\n[planar]\nladder = 10, 20\n";
    REQUIRE(run_text(text, dir) == kExitOk);
    // Header, two ladder rows and the extrapolated row.
    CHECK(count_lines(slurp(dir / "planar_convergence.csv")) == 4);
    fs::remove_all(dir);
}

TEST_CASE("check task reports and replays failures") {
    const fs::path dir = scratch_dir("check");
    REQUIRE(run_text("[task]\ntype = check\n[check]\ntheorem = t_monotonicity, dlp_sign\ntrials = 6\nseed = 42\n",
                     dir) == kExitOk);
    const auto report = nlohmann::json::parse(slurp(dir / "check_report.json"));
    CHECK(report["seed"] == 42);
    REQUIRE(report["theorems"].size() == 2);
    for (const auto& t : report["theorems"]) CHECK(t["failures"].empty());

    const fs::path bad = scratch_dir("check_bad");
    ConfigOverrides o;
    o.output_dir = bad.string();
    o.l_max = 2;
    const RunConfig failing = parse_config("[task]\ntype = check\n[check]\ntheorem = energy_sign\ntrials = 2\nseed = "
                                           "1\n",
                                           o);
    REQUIRE(run(failing) == kExitTheoremFailure);
    int replays = 0;
    for (const auto& entry : fs::directory_iterator(bad / "counterexamples")) {
        ++replays;
        const RunConfig replay = parse_config(slurp(entry.path()));
        CHECK(replay.check.trials == 1);
        CHECK(replay.check.seed == 1);
        CHECK(replay.check.spectrum.l.l_max == 2);
    }
    CHECK(replays == 2);
    fs::remove_all(dir);
    fs::remove_all(bad);
}

}  // TEST_SUITE
