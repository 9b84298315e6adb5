#include "casimir/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "casimir/detail/format.hpp"
#include "casimir/error.hpp"

namespace casimir {

using detail::format_number;
namespace pt = boost::property_tree;

namespace {

using Errors = std::vector<std::string>;
using KeySet = std::set<std::string>;

const std::map<std::string, KeySet> kSectionKeys{
    {"geometry", {"r1", "r2", "sphere", "wall", "gap"}},
    {"spectrum",
     {"temperature", "n_kappa", "n_kappa_max", "kappa_tolerance", "matsubara_tolerance", "matsubara_consecutive",
      "n_max", "l_tolerance", "l_consecutive", "l_max"}},
    {"task",
     {"type", "pressure_method", "kernel", "allow_undefined_sign", "cross_check", "cross_check_tolerance",
      "max_contrast", "max_temperature_radius"}},
    {"sweep",
     {"param1", "from1", "to1", "points1", "scale1", "param2", "from2", "to2", "points2", "scale2"}},
    {"check", {"theorem", "trials", "seed", "first_index", "derivative_tolerance"}},
    {"planar", {"d", "ladder", "l_max"}},
    {"output", {"dir", "csv", "diagnostics", "format"}},
};

// Keys per medium kind; the first group of each entry may be swept.
struct KindKeys {
    KeySet numeric;
    KeySet lists;
};

const std::map<std::string, KindKeys> kMediumKeys{
    {"constant", {{"eps", "mu"}, {}}},
    {"drude", {{"omega_p", "gamma", "mu"}, {}}},
    {"lorentz", {{"eps_static", "omega0", "mu"}, {}}},
    {"tabulated", {{"mu"}, {"kappa", "eps"}}},
    {"layered", {{}, {"radii", "eps"}}},
    {"linear_profile", {{"eps_center", "eps_surface", "radius"}, {}}},
};

constexpr std::string_view kMediumPrefix = "medium:";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> to_integer(const std::string& s) {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Inline comments: anything after ';' or '#' on a key line. Line numbers are kept.
std::string strip_comments(std::string_view text) {
    std::string out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty() && t.front() != '[') {
            const auto cut = line.find_first_of(";#");
            if (cut != std::string::npos) line.erase(cut);
        }
        out += line;
        out += '\n';
    }
    return out;
}

Errors unique(const Errors& errors) {
    Errors out;
    for (const auto& e : errors)
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    return out;
}

bool is_medium_section(const std::string& name) { return name.rfind(kMediumPrefix, 0) == 0; }

bool valid_medium_name(const std::string& section) {
    const std::string medium = section.substr(kMediumPrefix.size());
    return !medium.empty() && std::all_of(medium.begin(), medium.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

bool known_kind(const pt::ptree& section) {
    const auto kind = section.get_optional<std::string>("kind");
    return kind && kMediumKeys.count(trim(*kind)) > 0;
}

// Sections check_structure has already complained about are skipped later on.
bool well_formed_medium(const std::string& name, const pt::ptree& section) {
    return is_medium_section(name) && valid_medium_name(name) && known_kind(section);
}

class Reader {
  public:
    Reader(const pt::ptree& root, std::string section, Errors& errors)
        : tree_(root.get_child_optional(section)), section_(std::move(section)), errors_(errors) {}

    bool present() const { return tree_.has_value(); }
    bool has(const std::string& key) const { return raw(key).has_value(); }

    std::optional<std::string> raw(const std::string& key) const {
        if (!tree_) return std::nullopt;
        auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::optional<double> number(const std::string& key) const {
        const auto s = raw(key);
        if (!s) return std::nullopt;
        if (auto v = to_double(*s)) return v;
        fail(key, "expected a number, got '" + *s + "'");
        return std::nullopt;
    }
    double number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }
    std::optional<double> required_number(const std::string& key) const {
        if (!has(key)) {
            fail(key, "missing");
            return std::nullopt;
        }
        return number(key);
    }

    template <class Int>
    Int integer(const std::string& key, Int fallback) const {
        const auto s = raw(key);
        if (!s) return fallback;
        if (auto v = to_integer<Int>(*s)) return *v;
        fail(key, "expected an integer, got '" + *s + "'");
        return fallback;
    }

    bool flag(const std::string& key, bool fallback) const {
        const auto s = raw(key);
        if (!s) return fallback;
        if (*s == "true" || *s == "yes" || *s == "1") return true;
        if (*s == "false" || *s == "no" || *s == "0") return false;
        fail(key, "expected true or false, got '" + *s + "'");
        return fallback;
    }

    std::optional<std::vector<double>> list(const std::string& key) const {
        const auto s = raw(key);
        if (!s) return std::nullopt;
        std::vector<double> out;
        std::stringstream in(*s);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto v = to_double(trim(item));
            if (!v) {
                fail(key, "expected a comma-separated list of numbers, got '" + *s + "'");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        if (out.empty()) fail(key, "empty list");
        return out;
    }

    std::string choice(const std::string& key, const std::vector<std::string>& options,
                       const std::string& fallback) const {
        const auto s = raw(key);
        if (!s) return fallback;
        if (std::find(options.begin(), options.end(), *s) != options.end()) return *s;
        std::string all;
        for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
        fail(key, "'" + *s + "' is not one of " + all);
        return fallback;
    }

    void fail(const std::string& key, const std::string& message) const {
        errors_.push_back("[" + section_ + "] " + key + ": " + message);
    }

  private:
    boost::optional<const pt::ptree&> tree_;
    std::string section_;
    Errors& errors_;
};

void check_structure(const pt::ptree& root, Errors& errors) {
    for (const auto& [name, child] : root) {
        if (child.empty() && !child.data().empty()) {
            errors.push_back("key '" + name + "' appears outside any section");
            continue;
        }
        KeySet allowed;
        if (is_medium_section(name)) {
            if (!valid_medium_name(name)) {
                errors.push_back("[" + name + "]: medium names use letters, digits, '_' and '-'");
                continue;
            }
            const auto kind = child.get_optional<std::string>("kind");
            if (!kind) {
                errors.push_back("[" + name + "] kind: missing");
                continue;
            }
            const auto k = kMediumKeys.find(trim(*kind));
            if (k == kMediumKeys.end()) {
                errors.push_back("[" + name + "] kind: unknown medium kind '" + trim(*kind) +
                                 "' (constant, drude, lorentz, tabulated, layered, linear_profile)");
                continue;
            }
            allowed = k->second.numeric;
            allowed.insert(k->second.lists.begin(), k->second.lists.end());
            allowed.insert("kind");
        } else if (auto s = kSectionKeys.find(name); s != kSectionKeys.end()) {
            allowed = s->second;
        } else {
            errors.push_back("unknown section [" + name + "]");
            continue;
        }
        for (const auto& [key, value] : child)
            if (!allowed.count(key)) errors.push_back("[" + name + "] " + key + ": unknown key");
    }
}

std::optional<ResponseModel> build_medium(const pt::ptree& root, const std::string& section,
                                          std::optional<double> r1, Errors& errors) {
    Reader m(root, section, errors);
    const std::string kind = trim(root.get_child(section).get<std::string>("kind"));
    const std::size_t before = errors.size();
    auto need = [&](const std::string& key) { return m.required_number(key).value_or(1.0); };
    std::optional<ResponseModel> out;
    try {
        if (kind == "constant") {
            const double eps = need("eps"), mu = m.number("mu", 1.0);
            if (errors.size() == before) out = ResponseModel::constant(eps, mu);
        } else if (kind == "drude") {
            const double wp = need("omega_p"), gamma = need("gamma"), mu = m.number("mu", 1.0);
            if (errors.size() == before) out = ResponseModel::drude(wp, gamma, mu);
        } else if (kind == "lorentz") {
            const double e0 = need("eps_static"), w0 = need("omega0"), mu = m.number("mu", 1.0);
            if (errors.size() == before) out = ResponseModel::lorentz(e0, w0, mu);
        } else if (kind == "tabulated") {
            auto kappa = m.list("kappa"), eps = m.list("eps");
            if (!kappa) m.fail("kappa", "missing");
            if (!eps) m.fail("eps", "missing");
            const double mu = m.number("mu", 1.0);
            if (errors.size() == before) out = ResponseModel::tabulated(*kappa, *eps, mu);
        } else if (kind == "layered") {
            auto radii = m.list("radii"), eps = m.list("eps");
            if (!radii) m.fail("radii", "missing");
            if (!eps) m.fail("eps", "missing");
            if (errors.size() == before) out = ResponseModel::layered(*radii, *eps);
        } else if (kind == "linear_profile") {
            const double c = need("eps_center"), s = need("eps_surface");
            const auto radius = m.has("radius") ? m.number("radius") : r1;
            if (!radius) m.fail("radius", "missing and no geometry r1 to default to");
            if (errors.size() == before) out = ResponseModel::linear_profile(*radius, c, s);
        }
    } catch (const std::exception& e) {
        errors.push_back("[" + section + "]: " + e.what());
        out.reset();
    }
    return out;
}

std::optional<Task> parse_task_name(const std::string& s) {
    static const std::map<std::string, Task> names{
        {"energy", Task::energy},           {"pressure", Task::pressure},
        {"total_pressure", Task::total_pressure}, {"free_energy", Task::free_energy},
        {"planar_limit", Task::planar_limit}, {"check", Task::check}};
    const auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

// Media referenced from [geometry]: a section name or a bare number (constant eps).
std::optional<ResponseModel> resolve_medium(const Reader& geo, const std::string& key,
                                            const std::map<std::string, ResponseModel>& media) {
    const auto ref = geo.raw(key);
    if (!ref) {
        geo.fail(key, "missing");
        return std::nullopt;
    }
    if (auto eps = to_double(*ref)) {
        try {
            return ResponseModel::constant(*eps);
        } catch (const std::exception& e) {
            geo.fail(key, e.what());
            return std::nullopt;
        }
    }
    const auto it = media.find(*ref);
    if (it == media.end()) {
        geo.fail(key, "unresolved medium reference '" + *ref + "'");
        return std::nullopt;
    }
    return it->second;
}

bool is_vacuum_constant(const ResponseModel& m) {
    const auto* c = std::get_if<ConstantModel>(&m.spec());
    return c != nullptr && c->eps == 1.0 && m.mu() == 1.0;
}

SpectrumSpec read_spectrum(const pt::ptree& root, Errors& errors) {
    Reader spec(root, "spectrum", errors);
    SpectrumSpec s;
    s.temperature = spec.number("temperature", 0.0);
    s.mode = s.temperature > 0.0 ? SpectrumSpec::Mode::matsubara : SpectrumSpec::Mode::zero_temperature;
    s.n_kappa = spec.integer("n_kappa", s.n_kappa);
    s.n_kappa_max = spec.integer("n_kappa_max", s.n_kappa_max);
    s.kappa_tolerance = spec.number("kappa_tolerance", s.kappa_tolerance);
    s.matsubara_tolerance = spec.number("matsubara_tolerance", s.matsubara_tolerance);
    s.matsubara_consecutive = spec.integer("matsubara_consecutive", s.matsubara_consecutive);
    s.n_max = spec.integer("n_max", s.n_max);
    s.l.tolerance = spec.number("l_tolerance", s.l.tolerance);
    s.l.consecutive = spec.integer("l_consecutive", s.l.consecutive);
    s.l.l_max = spec.integer("l_max", s.l.l_max);
    if (s.temperature < 0.0) spec.fail("temperature", "must be >= 0");
    try {
        s.validate();
    } catch (const std::exception& e) {
        errors.push_back(std::string("[spectrum]: ") + e.what());
    }
    return s;
}

// Geometry and everything that depends on it. Appends to errors; the result is
// only meaningful when no error was added.
PointConfig build_point(const pt::ptree& root, Task task, Errors& errors) {
    PointConfig p;
    const std::size_t before = errors.size();

    Reader geo(root, "geometry", errors);
    if (!geo.present()) {
        errors.push_back("[geometry]: section missing");
        return p;
    }
    const auto r1 = geo.required_number("r1");
    const auto r2 = geo.required_number("r2");

    std::map<std::string, ResponseModel> media;
    for (const auto& [name, child] : root)
        if (well_formed_medium(name, child))
            if (auto m = build_medium(root, name, r1, errors)) media.emplace(name.substr(kMediumPrefix.size()), *m);

    auto sphere = resolve_medium(geo, "sphere", media);
    auto wall = resolve_medium(geo, "wall", media);
    auto gap = resolve_medium(geo, "gap", media);

    Reader spec(root, "spectrum", errors);
    p.spectrum = read_spectrum(root, errors);

    Reader t(root, "task", errors);
    p.method = t.choice("pressure_method", {"analytic", "finite_difference"}, "analytic") == "analytic"
                   ? PressureMethod::calogero_analytic
                   : PressureMethod::finite_difference;
    p.energy.kernel = t.choice("kernel", {"parallel", "reference"}, "parallel") == "parallel" ? Kernel::parallel
                                                                                             : Kernel::reference;
    p.energy.allow_undefined_sign = t.flag("allow_undefined_sign", false);
    p.energy.cross_check = t.flag("cross_check", false);
    p.energy.cross_check_tolerance = t.number("cross_check_tolerance", p.energy.cross_check_tolerance);
    p.gates.max_contrast = t.number("max_contrast", p.gates.max_contrast);
    p.gates.max_temperature_radius = t.number("max_temperature_radius", p.gates.max_temperature_radius);

    const bool radii_ok = r1 && r2 && *r1 > 0.0 && *r2 > *r1;
    if (r1 && !(*r1 > 0.0)) geo.fail("r1", "must be positive");
    if (r1 && r2 && *r1 > 0.0 && !(*r2 > *r1))
        geo.fail("r2", "need r1 < r2 (r1 = " + format_number(*r1) + ", r2 = " + format_number(*r2) + ")");
    if (radii_ok && sphere && wall && gap) {
        p.geometry = Geometry{*r1, *r2, *sphere, *wall, *gap};
        try {
            p.geometry.validate();
        } catch (const std::exception& e) {
            errors.push_back(std::string("[geometry]: ") + e.what());
        }
        if (const RadialProfile* prof = p.geometry.sphere.profile(); prof && prof->support_radius() > *r1)
            geo.fail("sphere", "profile extends to r = " + format_number(prof->support_radius()) +
                                   ", beyond the sphere radius r1 = " + format_number(*r1));
    }
    if (errors.size() != before) return p;

    const bool thermal = p.spectrum.mode == SpectrumSpec::Mode::matsubara;
    const Geometry& g = p.geometry;
    switch (task) {
        case Task::energy:
            if (thermal) spec.fail("temperature", "task energy is the zero-temperature energy; use task free_energy");
            break;
        case Task::free_energy:
            if (!thermal) spec.fail("temperature", "task free_energy needs temperature > 0");
            break;
        case Task::total_pressure:
            if (!is_vacuum_constant(g.gap))
                geo.fail("gap", "total_pressure: the dilute self term is only known for a vacuum gap (constant eps = 1)");
            if (!std::holds_alternative<ConstantModel>(g.sphere.spec()))
                geo.fail("sphere", "total_pressure: the dilute self term needs a constant sphere permittivity");
            break;
        case Task::planar_limit: {
            for (const auto& [key, m] : {std::pair{"sphere", &g.sphere}, {"wall", &g.wall}, {"gap", &g.gap}})
                if (!std::holds_alternative<ConstantModel>(m->spec()) || m->mu() != 1.0)
                    geo.fail(key, "planar_limit needs constant nonmagnetic media");
            Reader pl(root, "planar", errors);
            p.planar.d = pl.number("d", g.gap_width());
            p.planar.ladder = pl.list("ladder").value_or(std::vector<double>{10.0, 30.0, 100.0});
            p.planar.l_max = pl.integer("l_max", p.planar.l_max);
            if (!(p.planar.d > 0.0)) pl.fail("d", "must be positive");
            if (p.planar.ladder.size() < 2) pl.fail("ladder", "needs at least two radii to extrapolate");
            for (std::size_t i = 0; i < p.planar.ladder.size(); ++i)
                if (!(p.planar.ladder[i] > 0.0) || (i > 0 && !(p.planar.ladder[i] > p.planar.ladder[i - 1]))) {
                    pl.fail("ladder", "radii must be positive and increasing");
                    break;
                }
            if (p.planar.l_max < 1) pl.fail("l_max", "must be >= 1");
            break;
        }
        case Task::pressure:
        case Task::check: break;
    }
    return p;
}

// Numeric fields a sweep may name.
bool sweepable(const pt::ptree& root, const std::string& path) {
    static const KeySet fixed{"geometry.r1", "geometry.r2", "spectrum.temperature", "planar.d"};
    if (fixed.count(path)) return true;
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return false;
    const std::string section = path.substr(0, dot), key = path.substr(dot + 1);
    if (!is_medium_section(section)) return false;
    const auto child = root.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!child) return false;
    if (!well_formed_medium(section, *child)) return false;
    return kMediumKeys.at(trim(child->get<std::string>("kind"))).numeric.count(key) > 0;
}

void put_path(pt::ptree& root, const std::string& path, double value) {
    const auto dot = path.rfind('.');
    const pt::ptree::path_type name(path.substr(0, dot), '\0');
    if (!root.get_child_optional(name)) root.add_child(name, pt::ptree());
    pt::ptree& section = root.get_child(name);
    section.put(pt::ptree::path_type(path.substr(dot + 1), '\0'), format_number(value));
}

std::vector<SweepAxis> read_sweep(const pt::ptree& root, Errors& errors) {
    std::vector<SweepAxis> axes;
    Reader s(root, "sweep", errors);
    if (!s.present()) return axes;
    for (int i = 1; i <= 2; ++i) {
        const std::string n = std::to_string(i);
        const auto param = s.raw("param" + n);
        if (!param) {
            for (const char* k : {"from", "to", "points", "scale"})
                if (s.has(k + n)) s.fail(k + n, "set without param" + n);
            continue;
        }
        SweepAxis a;
        a.path = *param;
        const auto from = s.required_number("from" + n), to = s.required_number("to" + n);
        a.points = s.integer("points" + n, 0);
        a.log_scale = s.choice("scale" + n, {"linear", "log"}, "linear") == "log";
        if (a.points < 1) s.fail("points" + n, "must be >= 1");
        if (!from || !to) continue;
        a.from = *from;
        a.to = *to;
        if (a.log_scale && !(a.from > 0.0 && a.to > 0.0)) s.fail("scale" + n, "log scale needs positive bounds");
        if (a.path.find('.') == std::string::npos || !sweepable(root, a.path)) {
            s.fail("param" + n, "'" + a.path +
                                    "' does not name a numeric field (geometry.r1, geometry.r2, spectrum.temperature, "
                                    "planar.d or medium:NAME.KEY)");
            continue;
        }
        axes.push_back(a);
    }
    if (axes.size() == 2 && axes[0].path == axes[1].path) s.fail("param2", "sweeps the same field as param1");
    if (!s.has("param1") && s.has("param2")) s.fail("param2", "set without param1");
    return axes;
}

void apply_overrides(pt::ptree& root, const ConfigOverrides& o) {
    if (o.seed) root.put("check.seed", std::to_string(*o.seed));
    if (o.l_max) root.put("spectrum.l_max", std::to_string(*o.l_max));
    if (o.tolerance)
        for (const char* k : {"spectrum.l_tolerance", "spectrum.kappa_tolerance", "spectrum.matsubara_tolerance"})
            root.put(k, format_number(*o.tolerance));
    if (o.output_dir) root.put("output.dir", *o.output_dir);
}

}  // namespace

const char* task_name(Task t) {
    switch (t) {
        case Task::energy: return "energy";
        case Task::pressure: return "pressure";
        case Task::total_pressure: return "total_pressure";
        case Task::free_energy: return "free_energy";
        case Task::planar_limit: return "planar_limit";
        case Task::check: return "check";
    }
    return "unknown";
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) return {from};
    for (int k = 0; k < points; ++k) {
        const double m = points - 1;
        v[static_cast<std::size_t>(k)] =
            log_scale ? from * std::pow(to / from, k / m) : (from * (m - k) + to * k) / m;
    }
    // 15 significant digits: decimal grids then print as typed (0.3, not 0.30000000000000004).
    for (double& x : v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", x);
        x = std::strtod(buf, nullptr);
    }
    v.front() = from;
    v.back() = to;
    return v;
}

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
    pt::ptree root;
    try {
        std::istringstream in(strip_comments(text));
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }
    apply_overrides(root, overrides);

    Errors errors;
    check_structure(root, errors);

    RunConfig cfg;
    Reader task(root, "task", errors);
    const auto type = task.raw("type");
    if (!type) {
        cfg.task = Task::pressure;  // generic checks only
        errors.push_back("[task] type: missing");
    } else if (auto t = parse_task_name(*type)) {
        cfg.task = *t;
    } else {
        cfg.task = Task::pressure;  // generic checks only
        task.fail("type", "unknown task '" + *type +
                              "' (energy, pressure, total_pressure, free_energy, planar_limit, check)");
    }

    Reader out(root, "output", errors);
    cfg.output.dir = out.raw("dir").value_or(cfg.output.dir);
    cfg.output.csv = out.raw("csv").value_or(cfg.output.csv);
    cfg.output.diagnostics = out.raw("diagnostics").value_or(cfg.output.diagnostics);
    out.choice("format", {"csv"}, "csv");
    if (cfg.output.dir.empty()) out.fail("dir", "empty");
    // Validation continues past these errors so that one pass reports everything.

    if (cfg.task == Task::check) {
        Reader c(root, "check", errors);
        const std::string which = c.raw("theorem").value_or("all");
        if (which == "all") {
            cfg.check.theorems = all_theorems();
        } else {
            std::stringstream in(which);
            std::string item;
            while (std::getline(in, item, ',')) {
                if (auto id = parse_theorem(trim(item)))
                    cfg.check.theorems.push_back(*id);
                else
                    c.fail("theorem", "unknown theorem '" + trim(item) + "'");
            }
        }
        cfg.check.spectrum = read_spectrum(root, errors);
        if (cfg.check.spectrum.mode != SpectrumSpec::Mode::zero_temperature)
            errors.push_back("[spectrum] temperature: theorem checks run at zero temperature");
        cfg.check.trials = c.integer<long>("trials", cfg.check.trials);
        cfg.check.seed = c.integer<std::uint64_t>("seed", cfg.check.seed);
        cfg.check.first_index = c.integer<std::uint64_t>("first_index", cfg.check.first_index);
        cfg.check.derivative_tolerance = c.number("derivative_tolerance", cfg.check.derivative_tolerance);
        if (cfg.check.trials < 1) c.fail("trials", "must be >= 1");
        if (!(cfg.check.derivative_tolerance > 0.0)) c.fail("derivative_tolerance", "must be positive");
        if (root.get_child_optional("sweep")) errors.push_back("[sweep]: not supported for task check");
        // A geometry in a check file (replay files carry one) must still be well formed.
        if (root.get_child_optional("geometry")) build_point(root, Task::check, errors);
        if (!errors.empty()) throw ConfigError(unique(errors));
        return cfg;
    }

    cfg.sweep = read_sweep(root, errors);

    // Swept fields may be absent from the document; the base point takes the first grid value.
    pt::ptree base = root;
    for (const auto& a : cfg.sweep) put_path(base, a.path, a.from);
    PointConfig first = build_point(base, cfg.task, errors);
    if (!errors.empty()) throw ConfigError(unique(errors));

    if (cfg.sweep.empty()) {
        cfg.plan.push_back(std::move(first));
        return cfg;
    }
    const std::vector<double> outer = cfg.sweep[0].values();
    const std::vector<double> inner = cfg.sweep.size() > 1 ? cfg.sweep[1].values() : std::vector<double>{0.0};
    for (double u : outer)
        for (double v : inner) {
            pt::ptree point = base;
            std::vector<std::pair<std::string, double>> coords{{cfg.sweep[0].path, u}};
            put_path(point, cfg.sweep[0].path, u);
            if (cfg.sweep.size() > 1) {
                put_path(point, cfg.sweep[1].path, v);
                coords.emplace_back(cfg.sweep[1].path, v);
            }
            Errors local;
            PointConfig pc = build_point(point, cfg.task, local);
            std::string where = "sweep point";
            for (const auto& [path, value] : coords) where += " " + path + "=" + format_number(value);
            for (auto& e : local) errors.push_back(where + ": " + e);
            pc.coordinates = std::move(coords);
            cfg.plan.push_back(std::move(pc));
        }
    if (!errors.empty()) throw ConfigError(unique(errors));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string medium_section(const std::string& name, const ResponseModel& model) {
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
        return s;
    };
    std::string out = "[medium:" + name + "]\n";
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantModel>) {
                out += "kind = constant\neps = " + format_number(m.eps) + "\n";
            } else if constexpr (std::is_same_v<T, DrudeModel>) {
                out += "kind = drude\nomega_p = " + format_number(m.plasma_frequency) +
                       "\ngamma = " + format_number(m.damping) + "\n";
            } else if constexpr (std::is_same_v<T, LorentzModel>) {
                out += "kind = lorentz\neps_static = " + format_number(m.eps_static) +
                       "\nomega0 = " + format_number(m.resonance) + "\n";
            } else if constexpr (std::is_same_v<T, TabulatedModel>) {
                out += "kind = tabulated\nkappa = " + join(m.kappa) + "\neps = " + join(m.eps) + "\n";
            } else if (m.interpolation == RadialProfile::Interpolation::piecewise_linear && m.radii.size() == 2) {
                out += "kind = linear_profile\nradius = " + format_number(m.radii.back()) +
                       "\neps_center = " + format_number(m.eps.front()) +
                       "\neps_surface = " + format_number(m.eps.back()) + "\n";
            } else {
                out += "kind = layered\nradii = " + join(m.radii) + "\neps = " + join(m.eps) + "\n";
            }
        },
        model.spec());
    if (model.mu() != 1.0) out += "mu = " + format_number(model.mu()) + "\n";
    return out;
}

}  // namespace casimir
