#pragma once

// Run configuration: flat `key = value` files with [section] headers, scenario
// presets for the five packaged benchmark problems, translation to a
// ProblemSpec, and a JSON manifest of every resolved setting.
//
// File format (see configs/ for annotated examples):
//   - lines:  `key = value`, `[section]`, blank, or `# comment`
//   - `#` starts a comment anywhere on a line
//   - keys are case-sensitive; unknown keys are errors (typo guard)
//   - jump regions:  `<name>_region = lo1 hi1 [lo2 hi2 [lo3 hi3]] value`
//     (2*dim interval bounds then the value inside; `_region2`, `_region3`,
//     ... add more boxes; later boxes win where they overlap)

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hwrd/field.hpp"
#include "hwrd/haar.hpp"
#include "hwrd/ionic.hpp"
#include "hwrd/linalg.hpp"
#include "hwrd/problem.hpp"

namespace hwrd {

// -- raw config file -----------------------------------------------------------

class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    static ConfigFile parse_string(const std::string& text,
                                   const std::string& name = "<config>") {
        ConfigFile cf;
        cf.name_ = name;
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string line = raw;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::runtime_error(cf.where(line_no) + ": unterminated [section]");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw std::runtime_error(cf.where(line_no) + ": empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(cf.where(line_no) +
                                         ": expected `key = value` or `[section]`, got: " + line);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error(cf.where(line_no) + ": empty key");
            if (section.empty())
                throw std::runtime_error(cf.where(line_no) + ": key `" + key +
                                         "` appears before any [section] header");
            const std::string full = section + "." + key;
            if (cf.entries_.count(full))
                throw std::runtime_error(cf.where(line_no) + ": duplicate key `" + full +
                                         "` (first at line " +
                                         std::to_string(cf.entries_[full].line) + ")");
            cf.entries_[full] = Entry{value, line_no};
        }
        return cf;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str(), path);
    }

    bool has(const std::string& section, const std::string& key) const {
        return entries_.count(section + "." + key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return parse_double(it->second);
    }

    long long get_ll(const std::string& section, const std::string& key,
                     long long fallback) const {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(where(it->second.line) + ": `" + it->second.value +
                                     "` is not an integer (key " + section + "." + key + ")");
        }
    }

    std::vector<double> get_doubles(const std::string& section, const std::string& key) const {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return {};
        it->second.used = true;
        return parse_doubles(it->second);
    }

    // all "<section>.<prefix>", "<section>.<prefix>2", ... entries, ordered by
    // the numeric suffix (bare prefix counts as 1, so p1, p2, ..., p10 order
    // correctly even though the map is lexicographic)
    std::vector<std::pair<std::string, std::vector<double>>> get_numbered(
        const std::string& section, const std::string& prefix) const {
        std::vector<std::pair<long long, std::string>> keys;
        const std::string base = section + "." + prefix;
        for (const auto& [full, entry] : entries_) {
            if (full.rfind(base, 0) != 0) continue;
            const std::string suffix = full.substr(base.size());
            bool all_digits = true;
            for (char c : suffix) all_digits = all_digits && std::isdigit(static_cast<unsigned char>(c));
            if (!all_digits) continue;
            keys.emplace_back(suffix.empty() ? 1 : std::stoll(suffix), full);
        }
        std::sort(keys.begin(), keys.end());
        std::vector<std::pair<std::string, std::vector<double>>> out;
        for (const auto& [num, full] : keys) {
            const Entry& entry = entries_.at(full);
            entry.used = true;
            out.emplace_back(full, parse_doubles(entry));
        }
        return out;
    }

    // typo guard: every key must have been consumed by the resolver
    void require_all_used() const {
        std::string unknown;
        for (const auto& [full, entry] : entries_)
            if (!entry.used)
                unknown += "\n  line " + std::to_string(entry.line) + ": " + full;
        if (!unknown.empty())
            throw std::runtime_error(name_ + ": unknown configuration keys:" + unknown);
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }
    std::string where(int line) const { return name_ + ":" + std::to_string(line); }
    double parse_double(const Entry& e) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(where(e.line) + ": `" + e.value + "` is not a number");
        }
    }
    std::vector<double> parse_doubles(const Entry& e) const {
        std::istringstream ss(e.value);
        std::vector<double> out;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::runtime_error(where(e.line) + ": `" + tok + "` is not a number");
            }
        }
        return out;
    }

    std::string name_;
    std::map<std::string, Entry> entries_;
};

// -- resolved run configuration -------------------------------------------------

enum class Scenario {
    example1_fhn_1d,
    example2_fhn_2d,
    example3_ms_2d,
    example4_hh,
    example5_ms_3d,
    custom,
};

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::example1_fhn_1d: return "example1_fhn_1d";
        case Scenario::example2_fhn_2d: return "example2_fhn_2d";
        case Scenario::example3_ms_2d: return "example3_ms_2d";
        case Scenario::example4_hh: return "example4_hh";
        case Scenario::example5_ms_3d: return "example5_ms_3d";
        case Scenario::custom: return "custom";
    }
    return "?";
}

inline Scenario scenario_from_string(const std::string& s) {
    for (Scenario sc : {Scenario::example1_fhn_1d, Scenario::example2_fhn_2d,
                        Scenario::example3_ms_2d, Scenario::example4_hh,
                        Scenario::example5_ms_3d, Scenario::custom})
        if (s == to_string(sc)) return sc;
    throw std::runtime_error("unknown scenario `" + s +
                             "` (expected example1_fhn_1d, example2_fhn_2d, example3_ms_2d, "
                             "example4_hh, example5_ms_3d, or custom)");
}

// A scalar parameter given as base value plus jump boxes.
struct FieldSpec {
    double base = 0.0;
    std::vector<JumpRegion> regions;

    ParameterField build(int dim, double lo, double hi) const {
        ParameterField f = ParameterField::constant(dim, base);
        f.domain_lo = {lo, lo, lo};
        f.domain_hi = {hi, hi, hi};
        f.regions = regions;
        return f;
    }
};

struct RunConfig {
    Scenario scenario = Scenario::custom;
    int dim = 1;
    std::array<int, 3> level = {4, 4, 4};
    double domain_lo = 0.0, domain_hi = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;

    std::string model_kind = "fhn";  // fhn | ms | hh
    FieldSpec epsilon{1.0, {}};
    std::array<FieldSpec, 3> diffusion = {FieldSpec{1e-3, {}}, FieldSpec{1e-3, {}},
                                          FieldSpec{1e-3, {}}};
    FieldSpec fhn_k{1.0, {}};
    FieldSpec ms_tau_in{0.3, {}}, ms_tau_out{6.0, {}};
    FieldSpec ms_tau_open{120.0, {}}, ms_tau_close{150.0, {}};
    double ms_u_gate = 0.13;
    FieldSpec hh_g_na{120.0, {}}, hh_g_k{36.0, {}}, hh_g_l{0.3, {}};
    double hh_e_na = 115.0, hh_e_k = -12.0, hh_e_l = 10.613;

    double stim_amplitude = 0.0;
    long long stim_on_steps = -1;
    std::optional<JumpRegion> stim_region;

    std::optional<double> v0;    // constant part; default = model resting value
    double v0_cos_amp = 0.0;     // amplitude of a product-cosine perturbation
    int v0_cos_freq = 1;         // integer half-period count keeps walls no-flux
    std::optional<double> w0;    // first-gate constant override

    SolverConfig solver{SolveMethod::direct};
    std::vector<Point> probes;
    std::vector<double> snapshot_times;
    std::string output_dir = "out";
    bool allow_large = false;    // lifts the 3D resolution cap
};

inline RunConfig scenario_defaults(Scenario sc) {
    RunConfig c;
    c.scenario = sc;
    switch (sc) {
        case Scenario::example1_fhn_1d:
            // 1D FitzHugh-Nagumo with sustained stimulus
            c.dim = 1;
            c.level = {5, 5, 5};
            c.dt = 1e-3;
            c.t_end = 1.0;
            c.model_kind = "fhn";
            c.epsilon.base = 0.01;
            c.diffusion[0].base = 0.005;
            c.fhn_k.base = 1.0;
            c.stim_amplitude = 0.3;
            c.probes = {{0.1406, 0, 0}, {0.2656, 0, 0}, {0.3594, 0, 0},
                        {0.4531, 0, 0}, {0.5, 0, 0}};
            c.snapshot_times = {c.t_end};
            break;
        case Scenario::example2_fhn_2d:
            // 2D FitzHugh-Nagumo, anisotropic diffusion
            c.dim = 2;
            c.level = {4, 4, 4};
            c.dt = 1e-3;
            c.t_end = 0.5;
            c.model_kind = "fhn";
            c.epsilon.base = 0.01;
            c.diffusion[0].base = 1.2e-3;
            c.diffusion[1].base = 2.5562e-4;
            c.fhn_k.base = 1.0;
            c.stim_amplitude = 0.15;
            c.probes = {{0.1563, 0.1563, 0}, {0.4688, 0.4688, 0}};
            c.snapshot_times = {c.t_end};
            break;
        case Scenario::example3_ms_2d:
            // 2D Mitchell-Schaeffer, brief strong stimulus
            c.dim = 2;
            c.level = {4, 4, 4};
            c.dt = 1e-3;
            c.t_end = 3.5;
            c.model_kind = "ms";
            c.epsilon.base = 1.0;
            c.diffusion[0].base = 1.2e-3;
            c.diffusion[1].base = 2.5562e-4;
            c.v0 = 0.2;
            c.w0 = 0.2;
            c.stim_amplitude = 20.0;
            c.stim_on_steps = 100;
            c.probes = {{0.2344, 0.2344, 0}, {0.4531, 0.4531, 0}};
            c.snapshot_times = {c.t_end};
            break;
        case Scenario::example4_hh:
            // 2D Hodgkin-Huxley monodomain, 1 ms stimulus
            c.dim = 2;
            c.level = {4, 4, 4};
            c.dt = 1e-3;
            c.t_end = 20.0;
            c.model_kind = "hh";
            c.epsilon.base = 1.0;
            c.diffusion[0].base = 1.2e-3;
            c.diffusion[1].base = 2.5562e-4;
            c.stim_amplitude = 20.0;
            c.stim_on_steps = 1000;
            c.probes = {{0.2156, 0.2156, 0}, {0.5156, 0.5156, 0}, {0.7344, 0.7344, 0}};
            c.snapshot_times = {c.t_end};
            break;
        case Scenario::example5_ms_3d:
            // 3D Mitchell-Schaeffer
            c.dim = 3;
            c.level = {2, 2, 2};
            c.dt = 1e-3;
            c.t_end = 1.0;
            c.model_kind = "ms";
            c.epsilon.base = 1.0;
            c.diffusion[0].base = 1.2e-3;
            c.diffusion[1].base = 2.5562e-4;
            c.diffusion[2].base = 2.5562e-4;
            c.v0 = 0.2;
            c.w0 = 0.2;
            c.stim_amplitude = 20.0;
            c.stim_on_steps = 100;
            c.probes = {{0.5312, 0.5312, 0.5312}};
            c.snapshot_times = {c.t_end};
            break;
        case Scenario::custom:
            break;
    }
    return c;
}

namespace detail {

inline JumpRegion parse_region(const std::vector<double>& nums, int dim,
                               const std::string& key, bool with_value = true) {
    const int expected = 2 * dim + (with_value ? 1 : 0);
    if (static_cast<int>(nums.size()) != expected)
        throw std::runtime_error("region `" + key + "`: expected " + std::to_string(expected) +
                                 (with_value ? " numbers (lo hi per axis, then the value), got "
                                             : " numbers (lo hi per axis), got ") +
                                 std::to_string(nums.size()));
    JumpRegion r;
    for (int a = 0; a < dim; ++a) {
        r.lo[a] = nums[2 * a];
        r.hi[a] = nums[2 * a + 1];
        if (r.lo[a] > r.hi[a])
            throw std::runtime_error("region `" + key + "`: lo > hi on axis " +
                                     std::to_string(a + 1));
    }
    if (with_value) r.value = nums.back();
    return r;
}

inline void read_field(const ConfigFile& cf, const std::string& section,
                       const std::string& key, int dim, FieldSpec& out) {
    out.base = cf.get_double(section, key, out.base);
    for (const auto& [full, nums] : cf.get_numbered(section, key + "_region"))
        out.regions.push_back(parse_region(nums, dim, full));
}

}  // namespace detail

// Overlay file values on top of `c` (typically scenario defaults).
inline void apply_config(RunConfig& c, const ConfigFile& cf) {
    c.dim = static_cast<int>(cf.get_ll("run", "dim", c.dim));
    if (c.dim < 1 || c.dim > 3) throw std::runtime_error("run.dim must be 1, 2, or 3");
    if (cf.has("run", "level")) {
        const int j = static_cast<int>(cf.get_ll("run", "level", c.level[0]));
        c.level = {j, j, j};
    }
    c.level[0] = static_cast<int>(cf.get_ll("run", "level_x", c.level[0]));
    c.level[1] = static_cast<int>(cf.get_ll("run", "level_y", c.level[1]));
    c.level[2] = static_cast<int>(cf.get_ll("run", "level_z", c.level[2]));
    c.dt = cf.get_double("run", "dt", c.dt);
    c.t_end = cf.get_double("run", "t_end", c.t_end);
    c.output_dir = cf.get_string("run", "output_dir", c.output_dir);
    if (cf.has("run", "allow_large"))
        c.allow_large = cf.get_ll("run", "allow_large", c.allow_large ? 1 : 0) != 0;

    c.domain_lo = cf.get_double("domain", "lo", c.domain_lo);
    c.domain_hi = cf.get_double("domain", "hi", c.domain_hi);

    c.model_kind = cf.get_string("model", "kind", c.model_kind);
    if (c.model_kind != "fhn" && c.model_kind != "ms" && c.model_kind != "hh")
        throw std::runtime_error("model.kind must be fhn, ms, or hh");
    detail::read_field(cf, "model", "k", c.dim, c.fhn_k);
    detail::read_field(cf, "model", "tau_in", c.dim, c.ms_tau_in);
    detail::read_field(cf, "model", "tau_out", c.dim, c.ms_tau_out);
    detail::read_field(cf, "model", "tau_open", c.dim, c.ms_tau_open);
    detail::read_field(cf, "model", "tau_close", c.dim, c.ms_tau_close);
    c.ms_u_gate = cf.get_double("model", "u_gate", c.ms_u_gate);
    detail::read_field(cf, "model", "g_na", c.dim, c.hh_g_na);
    detail::read_field(cf, "model", "g_k", c.dim, c.hh_g_k);
    detail::read_field(cf, "model", "g_l", c.dim, c.hh_g_l);
    c.hh_e_na = cf.get_double("model", "e_na", c.hh_e_na);
    c.hh_e_k = cf.get_double("model", "e_k", c.hh_e_k);
    c.hh_e_l = cf.get_double("model", "e_l", c.hh_e_l);

    detail::read_field(cf, "pde", "epsilon", c.dim, c.epsilon);
    detail::read_field(cf, "pde", "d11", c.dim, c.diffusion[0]);
    detail::read_field(cf, "pde", "d22", c.dim, c.diffusion[1]);
    detail::read_field(cf, "pde", "d33", c.dim, c.diffusion[2]);

    c.stim_amplitude = cf.get_double("stimulus", "amplitude", c.stim_amplitude);
    c.stim_on_steps = cf.get_ll("stimulus", "on_steps", c.stim_on_steps);
    if (cf.has("stimulus", "region")) {
        const auto nums = cf.get_doubles("stimulus", "region");
        c.stim_region = detail::parse_region(nums, c.dim, "stimulus.region",
                                             /*with_value=*/false);
    }

    if (cf.has("initial", "v0")) c.v0 = cf.get_double("initial", "v0", 0.0);
    c.v0_cos_amp = cf.get_double("initial", "v0_cos_amp", c.v0_cos_amp);
    c.v0_cos_freq = static_cast<int>(cf.get_ll("initial", "v0_cos_freq", c.v0_cos_freq));
    if (cf.has("initial", "w0")) c.w0 = cf.get_double("initial", "w0", 0.0);

    const std::string method =
        cf.get_string("solver", "method", to_string(c.solver.method));
    if (method == "direct") c.solver.method = SolveMethod::direct;
    else if (method == "cgs") c.solver.method = SolveMethod::cgs;
    else if (method == "bicg") c.solver.method = SolveMethod::bicg;
    else if (method == "bicgstab") c.solver.method = SolveMethod::bicgstab;
    else if (method == "gmres") c.solver.method = SolveMethod::gmres;
    else throw std::runtime_error("solver.method must be direct, cgs, bicg, bicgstab, or gmres");
    c.solver.tol = cf.get_double("solver", "tol", c.solver.tol);
    c.solver.restart = static_cast<std::size_t>(cf.get_ll("solver", "restart",
                                                static_cast<long long>(c.solver.restart)));
    c.solver.max_iter = static_cast<std::size_t>(cf.get_ll("solver", "max_iter",
                                                 static_cast<long long>(c.solver.max_iter)));
    const std::string precond =
        cf.get_string("solver", "preconditioner", to_string(c.solver.preconditioner));
    if (precond == "none") c.solver.preconditioner = PrecondKind::none;
    else if (precond == "ilu0") c.solver.preconditioner = PrecondKind::ilu0;
    else throw std::runtime_error("solver.preconditioner must be none or ilu0");

    {
        auto numbered = cf.get_numbered("probes", "p");
        if (!numbered.empty()) {
            c.probes.clear();
            for (const auto& [key, nums] : numbered) {
                if (static_cast<int>(nums.size()) != c.dim)
                    throw std::runtime_error("probe `" + key + "`: expected " +
                                             std::to_string(c.dim) + " coordinates");
                Point p{0.0, 0.0, 0.0};
                for (int a = 0; a < c.dim; ++a) p[a] = nums[a];
                c.probes.push_back(p);
            }
        }
    }
    {
        auto numbered = cf.get_numbered("snapshots", "t");
        if (!numbered.empty()) {
            c.snapshot_times.clear();
            for (const auto& [key, nums] : numbered) {
                if (nums.size() != 1)
                    throw std::runtime_error("snapshot `" + key + "`: expected one time value");
                c.snapshot_times.push_back(nums[0]);
            }
        }
    }
}

inline void validate(const RunConfig& c) {
    if (c.domain_hi <= c.domain_lo) throw std::runtime_error("domain.hi must exceed domain.lo");
    if (c.dt <= 0.0) throw std::runtime_error("run.dt must be positive");
    if (c.t_end <= 0.0) throw std::runtime_error("run.t_end must be positive");
    for (int a = 0; a < c.dim; ++a) {
        if (c.level[a] < 0 || c.level[a] > 8)
            throw std::runtime_error("resolution level must lie in 0..8 (axis " +
                                     std::to_string(a + 1) + " has " +
                                     std::to_string(c.level[a]) + ")");
        if (c.dim == 3 && c.level[a] > 3 && !c.allow_large)
            throw std::runtime_error(
                "3D runs are capped at level 3 by default; pass --allow-large "
                "(or set run.allow_large = 1) to override");
    }
    for (const Point& p : c.probes)
        for (int a = 0; a < c.dim; ++a)
            if (p[a] < c.domain_lo || p[a] > c.domain_hi)
                throw std::runtime_error("probe coordinate " + std::to_string(p[a]) +
                                         " lies outside the domain");
    if (c.v0_cos_amp != 0.0 && c.v0_cos_freq < 1)
        throw std::runtime_error("initial.v0_cos_freq must be a positive integer");
    if (c.w0 && c.model_kind == "hh")
        throw std::runtime_error("initial.w0 override is only supported for one-gate models");
}

inline RunConfig load_run_config(const ConfigFile& cf) {
    const std::string sc_name = cf.get_string("run", "scenario", "custom");
    RunConfig c = scenario_defaults(scenario_from_string(sc_name));
    apply_config(c, cf);
    cf.require_all_used();
    validate(c);
    return c;
}

// -- RunConfig -> ProblemSpec ---------------------------------------------------

inline IonicModel build_model(const RunConfig& c) {
    const int dim = c.dim;
    const double lo = c.domain_lo, hi = c.domain_hi;
    if (c.model_kind == "fhn") {
        return FhnModel{c.fhn_k.build(dim, lo, hi)};
    }
    if (c.model_kind == "ms") {
        MsModel m;
        m.tau_in = c.ms_tau_in.build(dim, lo, hi);
        m.tau_out = c.ms_tau_out.build(dim, lo, hi);
        m.tau_open = c.ms_tau_open.build(dim, lo, hi);
        m.tau_close = c.ms_tau_close.build(dim, lo, hi);
        m.u_gate = c.ms_u_gate;
        return m;
    }
    HhModel m;
    m.g_na = c.hh_g_na.build(dim, lo, hi);
    m.g_k = c.hh_g_k.build(dim, lo, hi);
    m.g_l = c.hh_g_l.build(dim, lo, hi);
    m.e_na = c.hh_e_na;
    m.e_k = c.hh_e_k;
    m.e_l = c.hh_e_l;
    return m;
}

inline ProblemSpec to_problem_spec(const RunConfig& c) {
    ProblemSpec s;
    s.dim = c.dim;
    for (int a = 0; a < c.dim; ++a)
        s.bases[a] = HaarBasis(c.domain_lo, c.domain_hi, c.level[a]);
    s.epsilon = c.epsilon.build(c.dim, c.domain_lo, c.domain_hi);
    for (int a = 0; a < c.dim; ++a)
        s.diffusion[a] = c.diffusion[a].build(c.dim, c.domain_lo, c.domain_hi);
    s.model = build_model(c);
    s.stimulus = StimulusProtocol{c.stim_amplitude, c.stim_on_steps, c.stim_region};
    s.dt = c.dt;
    s.t_end = c.t_end;
    s.solver = c.solver;

    const double v0_base = c.v0 ? *c.v0 : model_default_v0(s.model);
    if (c.v0_cos_amp != 0.0) {
        const int dim = c.dim;
        const double amp = c.v0_cos_amp, lo = c.domain_lo;
        const double freq_pi = c.v0_cos_freq * M_PI / (c.domain_hi - c.domain_lo);
        s.v0 = [=](const Point& p) {
            double prod = 1.0;
            for (int a = 0; a < dim; ++a) prod *= std::cos(freq_pi * (p[a] - lo));
            return v0_base + amp * prod;
        };
    } else if (c.v0) {
        s.v0 = [v0_base](const Point&) { return v0_base; };
    }
    if (c.w0) {
        const double w0 = *c.w0;
        s.w0 = {[w0](const Point&) { return w0; }};
    }
    return s;
}

// -- manifest -------------------------------------------------------------------

inline nlohmann::json region_json(const JumpRegion& r, int dim) {
    nlohmann::json j;
    for (int a = 0; a < dim; ++a) {
        j["lo"].push_back(r.lo[a]);
        j["hi"].push_back(r.hi[a]);
    }
    j["value"] = r.value;
    return j;
}

inline nlohmann::json field_json(const FieldSpec& f, int dim) {
    nlohmann::json j;
    j["base"] = f.base;
    j["regions"] = nlohmann::json::array();
    for (const auto& r : f.regions) j["regions"].push_back(region_json(r, dim));
    return j;
}

// Every resolved setting, including defaults the code filled in.
inline nlohmann::json manifest_json(const RunConfig& c) {
    nlohmann::json j;
    j["scenario"] = to_string(c.scenario);
    j["dim"] = c.dim;
    for (int a = 0; a < c.dim; ++a) j["level"].push_back(c.level[a]);
    j["points_per_axis"] = nlohmann::json::array();
    for (int a = 0; a < c.dim; ++a) j["points_per_axis"].push_back(2 << c.level[a]);
    j["domain"] = {{"lo", c.domain_lo}, {"hi", c.domain_hi}};
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["steps"] = static_cast<long long>(std::llround(c.t_end / c.dt));

    j["model"]["kind"] = c.model_kind;
    if (c.model_kind == "fhn") {
        j["model"]["k"] = field_json(c.fhn_k, c.dim);
    } else if (c.model_kind == "ms") {
        j["model"]["tau_in"] = field_json(c.ms_tau_in, c.dim);
        j["model"]["tau_out"] = field_json(c.ms_tau_out, c.dim);
        j["model"]["tau_open"] = field_json(c.ms_tau_open, c.dim);
        j["model"]["tau_close"] = field_json(c.ms_tau_close, c.dim);
        j["model"]["u_gate"] = c.ms_u_gate;
    } else {
        j["model"]["g_na"] = field_json(c.hh_g_na, c.dim);
        j["model"]["g_k"] = field_json(c.hh_g_k, c.dim);
        j["model"]["g_l"] = field_json(c.hh_g_l, c.dim);
        j["model"]["e_na"] = c.hh_e_na;
        j["model"]["e_k"] = c.hh_e_k;
        j["model"]["e_l"] = c.hh_e_l;
    }

    j["pde"]["epsilon"] = field_json(c.epsilon, c.dim);
    const char* dnames[3] = {"d11", "d22", "d33"};
    for (int a = 0; a < c.dim; ++a) j["pde"][dnames[a]] = field_json(c.diffusion[a], c.dim);

    j["stimulus"]["amplitude"] = c.stim_amplitude;
    j["stimulus"]["on_steps"] = c.stim_on_steps;
    if (c.stim_region) j["stimulus"]["region"] = region_json(*c.stim_region, c.dim);

    j["initial"]["v0"] = c.v0 ? nlohmann::json(*c.v0) : nlohmann::json("model-default");
    j["initial"]["v0_cos_amp"] = c.v0_cos_amp;
    j["initial"]["v0_cos_freq"] = c.v0_cos_freq;
    j["initial"]["w0"] = c.w0 ? nlohmann::json(*c.w0) : nlohmann::json("model-default");

    j["solver"]["method"] = to_string(c.solver.method);
    j["solver"]["tol"] = c.solver.tol;
    j["solver"]["restart"] = c.solver.restart;
    j["solver"]["max_iter"] = c.solver.max_iter;
    j["solver"]["preconditioner"] = to_string(c.solver.preconditioner);

    for (const Point& p : c.probes) {
        nlohmann::json pj = nlohmann::json::array();
        for (int a = 0; a < c.dim; ++a) pj.push_back(p[a]);
        j["probes"].push_back(pj);
    }
    j["snapshot_times"] = c.snapshot_times;
    j["output_dir"] = c.output_dir;

    // fixed method conventions the data formats depend on
    j["conventions"]["boundary_closure"] = "neumann-constant-mode";
    j["conventions"]["time_stepping"] =
        "diffusion implicit; reaction explicit at (v_s, w_{s+1}); gating forward Euler "
        "via exact Haar expansion round trip";
    j["conventions"]["flatten_order"] = "x-fastest";
    j["conventions"]["collocation"] = "cell midpoints, per axis";
    j["conventions"]["csv_float_format"] = "%.12e";
    return j;
}

}  // namespace hwrd
