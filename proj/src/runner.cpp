#include "casimir/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <variant>

#include <json.hpp>

#include "casimir/detail/format.hpp"
#include "casimir/error.hpp"

namespace casimir {

using detail::format_number;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct PointResult {
    int status = kExitOk;
    std::string error;
    PairSign sign;
    std::optional<EnergyReport> report;
    std::optional<PlanarResult> planar;
};

const char* status_name(int status) {
    switch (status) {
        case kExitOk: return "ok";
        case kExitUndefinedSign: return "undefined_sign";
        default: return "convergence_failure";
    }
}

std::string sign_text(Sign s) {
    switch (s) {
        case Sign::plus: return "+1";
        case Sign::minus: return "-1";
        case Sign::undefined: break;
    }
    return "undefined";
}

std::string unit_of(Task t) { return t == Task::energy || t == Task::free_energy ? "1/length" : "1/length^4"; }

double constant_eps(const ResponseModel& m) { return std::get<ConstantModel>(m.spec()).eps; }

PointResult evaluate(Task task, const PointConfig& p) {
    PointResult r;
    const Geometry& g = p.geometry;
    try {
        r.sign = pair_sign(g);
        switch (task) {
            case Task::energy: r.report = interaction_energy(g, p.spectrum, p.energy); break;
            case Task::pressure: r.report = interaction_pressure(g, p.spectrum, p.method, p.energy); break;
            case Task::total_pressure:
                r.report = total_pressure(g, p.spectrum, p.method, p.energy, p.gates);
                break;
            case Task::free_energy: r.report = matsubara_free_energy(g, p.spectrum, p.energy); break;
            case Task::planar_limit: {
                PlanarOptions opts;
                opts.l_max = p.planar.l_max;
                opts.spectrum = p.spectrum;
                opts.energy = p.energy;
                std::vector<double> radii;
                for (double f : p.planar.ladder) radii.push_back(f * p.planar.d);
                r.planar = planar_limit_force(p.planar.d, constant_eps(g.sphere), constant_eps(g.wall),
                                              constant_eps(g.gap), radii, opts);
                break;
            }
            case Task::check: break;
        }
    } catch (const UndefinedSignError& e) {
        r.status = kExitUndefinedSign;
        r.error = e.what();
    } catch (const std::exception& e) {
        // Convergence, contraction, cross-validation and capability failures.
        r.status = kExitConvergence;
        r.error = e.what();
    }
    return r;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
    return line + "\r\n";
}

std::vector<std::string> csv_row(Task task, const PointConfig& p, const PointResult& r) {
    const Geometry& g = p.geometry;
    std::string value = "nan", l_used = "0", n_used = "0", converged = "false";
    if (r.report) {
        value = format_number(r.report->value);
        l_used = std::to_string(r.report->l_max_used);
        n_used = std::to_string(r.report->n_kappa_used);
        converged = r.report->converged ? "true" : "false";
    } else if (r.planar) {
        int l = 0, n = 0;
        for (const auto& row : r.planar->table) {
            l = std::max(l, row.l_max_used);
            n = std::max(n, row.n_kappa_used);
        }
        value = format_number(r.planar->extrapolated);
        l_used = std::to_string(l);
        n_used = std::to_string(n);
        converged = "true";
    }
    return {task_name(task),
            format_number(g.r1),
            format_number(g.r2),
            g.sphere.kind_name(),
            g.sphere.params_string(),
            g.wall.kind_name(),
            g.wall.params_string(),
            g.gap.kind_name(),
            g.gap.params_string(),
            format_number(g.wall.mu()),
            format_number(p.spectrum.mode == SpectrumSpec::Mode::matsubara ? p.spectrum.temperature : 0.0),
            value,
            unit_of(task),
            sign_text(r.sign.value),
            l_used,
            n_used,
            converged};
}

json report_json(const EnergyReport& e) {
    json j;
    j["value"] = e.value;
    j["quantity"] = e.quantity;
    j["unit"] = e.unit;
    j["l_max_used"] = e.l_max_used;
    j["n_kappa_used"] = e.n_kappa_used;
    j["converged"] = e.converged;
    json parts = json::object();
    for (const auto& [name, v] : e.parts) parts[name] = v;
    j["parts"] = parts;
    const Diagnostics& d = e.diagnostics;
    j["diagnostics"] = {{"l_tail", d.l_tail},
                        {"quadrature_change", d.quadrature_change},
                        {"max_product", d.max_product},
                        {"dilute_ratio", d.dilute_ratio},
                        {"dominant_kappa", d.dominant_kappa},
                        {"matsubara_terms", d.matsubara_terms},
                        {"cross_check_difference", d.cross_check_difference},
                        {"warnings", d.warnings}};
    json modes = json::array();
    for (const auto& m : e.per_mode) modes.push_back({{"l", m.l}, {"pol", polarization_name(m.pol)}, {"value", m.value}});
    j["per_mode"] = modes;
    return j;
}

json planar_json(const PlanarResult& r) {
    json rows = json::array();
    for (const auto& row : r.table)
        rows.push_back({{"r1", row.r1}, {"force", row.force}, {"l_max_used", row.l_max_used},
                        {"n_kappa_used", row.n_kappa_used}});
    return {{"extrapolated", r.extrapolated}, {"sign", r.sign}, {"fit", r.fit},
            {"lifshitz_reference", r.lifshitz_reference}, {"max_product", r.max_product}, {"table", rows}};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

int run_points(const RunConfig& cfg, const RunOptions& opts) {
    const fs::path dir(cfg.output.dir);
    fs::create_directories(dir);

    const long n = static_cast<long>(cfg.plan.size());
    std::vector<PointResult> results(cfg.plan.size());
    long done = 0;
#pragma omp parallel for schedule(dynamic) if (n > 1)
    for (long k = 0; k < n; ++k) {
        results[static_cast<std::size_t>(k)] = evaluate(cfg.task, cfg.plan[static_cast<std::size_t>(k)]);
        if (opts.progress) {
#pragma omp critical(casimir_progress)
            *opts.progress << "[" << ++done << "/" << n << "] point " << k << ": "
                           << status_name(results[static_cast<std::size_t>(k)].status) << "\n";
        }
    }

    // Single writer, in plan order.
    std::string csv = csv_line(csv_columns());
    json points = json::array();
    int exit_code = kExitOk;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const PointConfig& p = cfg.plan[k];
        const PointResult& r = results[k];
        exit_code = std::max(exit_code, r.status);
        csv += csv_line(csv_row(cfg.task, p, r));
        json j;
        j["index"] = k;
        json coords = json::object();
        for (const auto& [path, v] : p.coordinates) coords[path] = v;
        j["coordinates"] = coords;
        j["status"] = status_name(r.status);
        if (!r.error.empty()) j["error"] = r.error;
        j["sign_class"] = {{"sphere", sign_text(r.sign.sphere.value)},
                           {"wall", sign_text(r.sign.wall.value)},
                           {"pair", sign_text(r.sign.value)}};
        if (r.report) j["result"] = report_json(*r.report);
        if (r.planar) j["planar"] = planar_json(*r.planar);
        points.push_back(j);
    }
    write_file(dir / cfg.output.csv, csv);

    if (cfg.task == Task::planar_limit) {
        std::string table = csv_line({"point", "r1", "r2", "d_over_r1", "force", "l_max_used", "n_kappa_used"});
        for (std::size_t k = 0; k < results.size(); ++k) {
            if (!results[k].planar) continue;
            const PlanarResult& pr = *results[k].planar;
            const double d = cfg.plan[k].planar.d;
            for (const auto& row : pr.table)
                table += csv_line({std::to_string(k), format_number(row.r1), format_number(row.r1 + d),
                                   format_number(d / row.r1), format_number(row.force),
                                   std::to_string(row.l_max_used), std::to_string(row.n_kappa_used)});
            table += csv_line({std::to_string(k), "inf", "inf", "0", format_number(pr.extrapolated), "", ""});
        }
        write_file(dir / "planar_convergence.csv", table);
    }

    json diag;
    diag["task"] = task_name(cfg.task);
    diag["csv_columns"] = csv_columns();
    diag["points"] = points;
    diag["exit_code"] = exit_code;
    write_file(dir / cfg.output.diagnostics, diag.dump(2) + "\n");
    return exit_code;
}

std::string counterexample_name(const TheoremReport& r, const Counterexample& c) {
    return std::string(theorem_name(r.theorem)) + "_" + std::to_string(c.trial.index) + ".ini";
}

int run_check(const RunConfig& cfg, const RunOptions& opts) {
    const fs::path dir(cfg.output.dir);
    fs::create_directories(dir);

    HarnessOptions h;
    h.first_index = cfg.check.first_index;
    h.derivative_tolerance = cfg.check.derivative_tolerance;
    h.spectrum = cfg.check.spectrum;

    int exit_code = kExitOk;
    json suites = json::array();
    for (TheoremId id : cfg.check.theorems) {
        json s;
        s["theorem"] = theorem_name(id);
        s["seed"] = cfg.check.seed;
        s["first_index"] = cfg.check.first_index;
        try {
            const TheoremReport r = run_suite(id, cfg.check.trials, cfg.check.seed, h);
            s["trials"] = r.trials;
            s["skipped"] = r.skipped;
            s["passed"] = r.passed();
            s["max_product"] = r.max_product;
            s["notes"] = r.notes;
            json failures = json::array();
            if (!r.failures.empty()) fs::create_directories(dir / "counterexamples");
            for (const auto& f : r.failures) {
                const std::string name = counterexample_name(r, f);
                write_file(dir / "counterexamples" / name, replay_config(r, f, cfg.check));
                failures.push_back({{"index", f.trial.index}, {"detail", f.detail}, {"observed", f.observed},
                                    {"replay", "counterexamples/" + name}});
            }
            s["failures"] = failures;
            if (!r.passed()) exit_code = std::max<int>(exit_code, kExitTheoremFailure);
            if (opts.progress)
                *opts.progress << theorem_name(id) << ": " << r.trials << " trials, " << r.failures.size()
                               << " failures\n";
        } catch (const std::exception& e) {
            s["passed"] = false;
            s["error"] = e.what();
            exit_code = std::max<int>(exit_code, kExitConvergence);
            if (opts.progress) *opts.progress << theorem_name(id) << ": " << e.what() << "\n";
        }
        suites.push_back(s);
    }
    json report;
    report["theorems"] = suites;
    report["trials"] = cfg.check.trials;
    report["seed"] = cfg.check.seed;
    write_file(dir / "check_report.json", report.dump(2) + "\n");

    json diag;
    diag["task"] = "check";
    diag["report"] = "check_report.json";
    diag["exit_code"] = exit_code;
    write_file(dir / cfg.output.diagnostics, diag.dump(2) + "\n");
    return exit_code;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "task",      "r1",          "r2",    "eps1_kind", "eps1_params", "eps2_kind",  "eps2_params",
        "epsM_kind", "epsM_params", "mu2",   "temperature", "value",     "unit",       "sign_class",
        "l_max_used", "n_kappa_used", "converged"};
    return cols;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string replay_config(const TheoremReport& report, const Counterexample& failure, const CheckSettings& settings) {
    const Trial& t = failure.trial;
    std::string out;
    out += "; replays trial " + std::to_string(t.index) + " of " + theorem_name(report.theorem) + "\n";
    out += "; failure: " + failure.detail + " (observed " + format_number(failure.observed) + ")\n";
    if (report.theorem == TheoremId::t_monotonicity || report.theorem == TheoremId::a_ell_sign)
        out += "; mode: l = " + std::to_string(t.mode.l) + ", " + polarization_name(t.mode.pol) + "\n";
    if (report.theorem == TheoremId::t_monotonicity) out += "; kappa = " + format_number(t.kappa) + "\n";
    if (!t.radii.empty()) {
        out += "; radii =";
        for (double r : t.radii) out += " " + format_number(r);
        out += "\n";
    }
    out += "\n[task]\ntype = check\n\n[check]\ntheorem = " + std::string(theorem_name(report.theorem)) +
           "\nseed = " + std::to_string(report.seed) + "\nfirst_index = " + std::to_string(t.index) +
           "\ntrials = 1\nderivative_tolerance = " + format_number(settings.derivative_tolerance) + "\n\n";
    const SpectrumSpec& s = settings.spectrum;
    out += "[spectrum]\nn_kappa = " + std::to_string(s.n_kappa) + "\nn_kappa_max = " + std::to_string(s.n_kappa_max) +
           "\nkappa_tolerance = " + format_number(s.kappa_tolerance) + "\nl_tolerance = " +
           format_number(s.l.tolerance) + "\nl_consecutive = " + std::to_string(s.l.consecutive) +
           "\nl_max = " + std::to_string(s.l.l_max) + "\n\n";
    out += "[geometry]\nr1 = " + format_number(t.geometry.r1) + "\nr2 = " + format_number(t.geometry.r2) +
           "\nsphere = sphere\nwall = wall\ngap = gap\n\n";
    out += medium_section("sphere", t.geometry.sphere) + "\n";
    out += medium_section("wall", t.geometry.wall) + "\n";
    out += medium_section("gap", t.geometry.gap);
    return out;
}

int run(const RunConfig& config, const RunOptions& options) {
    return config.task == Task::check ? run_check(config, options) : run_points(config, options);
}

}  // namespace casimir
