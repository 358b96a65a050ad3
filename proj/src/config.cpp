#include "couette/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "couette/error.hpp"

namespace couette {

PhysicalParams RunConfig::params() const {
    if (eps) {
        const double m = mach_for_eps(*eps, gamma);
        return with_eps(build_params(gamma, m, reynolds, prandtl, visc_ratio, chi), *eps);
    }
    return build_params(gamma, mach, reynolds, prandtl, visc_ratio, chi);
}

Grid RunConfig::grid() const { return Grid::make(n1, n2); }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Where {
    std::string key;
    int line;
};

[[noreturn]] void fail(const Where& w, const std::string& what) {
    std::string loc = w.line > 0    ? "line " + std::to_string(w.line)
                      : w.line == 0 ? "default"
                                    : "--set override";
    throw ConfigError(w.key, w.line, w.key + " (" + loc + "): " + what);
}

double to_double(const std::string& v, const Where& w) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || v.empty()) fail(w, "expected a real number, got '" + v + "'");
    return x;
}

int to_int(const std::string& v, const Where& w) {
    int x = 0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || v.empty()) fail(w, "expected an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& v, const Where& w) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(w, "expected a boolean (true/false), got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const Where& w) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), w));
    if (out.empty()) fail(w, "expected a comma-separated list of reals");
    return out;
}

std::string from_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + g17(v[k]);
    return s;
}

struct Entry {
    std::function<void(RunConfig&, const std::string&, const Where&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define REAL(field) \
    Entry{[](RunConfig& c, const std::string& v, const Where& w) { c.field = to_double(v, w); }, \
          [](const RunConfig& c) { return g17(c.field); }}
#define INT(field) \
    Entry{[](RunConfig& c, const std::string& v, const Where& w) { c.field = to_int(v, w); }, \
          [](const RunConfig& c) { return std::to_string(c.field); }}
#define BOOL(field) \
    Entry{[](RunConfig& c, const std::string& v, const Where& w) { c.field = to_bool(v, w); }, \
          [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }}
#define LIST(field) \
    Entry{[](RunConfig& c, const std::string& v, const Where& w) { c.field = to_list(v, w); }, \
          [](const RunConfig& c) { return from_list(c.field); }}

const std::vector<std::pair<std::string, Entry>>& table() {
    static const std::vector<std::pair<std::string, Entry>> t = {
        {"physics.gamma", REAL(gamma)},
        {"physics.mach", REAL(mach)},
        {"physics.eps",
         Entry{[](RunConfig& c, const std::string& v, const Where& w) { c.eps = to_double(v, w); },
               [](const RunConfig& c) { return c.eps ? g17(*c.eps) : std::string("none"); }}},
        {"physics.reynolds", REAL(reynolds)},
        {"physics.prandtl", REAL(prandtl)},
        {"physics.visc_ratio", REAL(visc_ratio)},
        {"physics.chi", REAL(chi)},
        {"grid.n1", INT(n1)},
        {"grid.n2", INT(n2)},
        {"solver.scheme",
         Entry{[](RunConfig& c, const std::string& v, const Where& w) {
                   if (v == "imex_cnab") c.solver.scheme = Scheme::imex_cnab;
                   else if (v == "explicit_rk4") c.solver.scheme = Scheme::explicit_rk4;
                   else fail(w, "expected imex_cnab or explicit_rk4, got '" + v + "'");
               },
               [](const RunConfig& c) {
                   return std::string(c.solver.scheme == Scheme::imex_cnab ? "imex_cnab"
                                                                           : "explicit_rk4");
               }}},
        {"solver.dt", REAL(solver.dt)},
        {"solver.t_end", REAL(solver.t_end)},
        {"solver.diag_stride", INT(solver.diag_stride)},
        {"solver.dealias", BOOL(solver.dealias_on)},
        {"solver.cfl_acoustic", REAL(solver.cfl_acoustic)},
        {"solver.cfl_viscous", REAL(solver.cfl_viscous)},
        {"solver.linear", BOOL(solver.linear)},
        {"initial.a_phi", REAL(initial.a_phi)},
        {"initial.a_psi", REAL(initial.a_psi)},
        {"initial.a_theta", REAL(initial.a_theta)},
        {"experiment.kind",
         Entry{[](RunConfig& c, const std::string& v, const Where& w) {
                   if (v == "sweep") c.experiment = ExperimentKind::sweep;
                   else if (v == "stiffness") c.experiment = ExperimentKind::stiffness;
                   else fail(w, "expected sweep or stiffness, got '" + v + "'");
               },
               [](const RunConfig& c) {
                   return std::string(c.experiment == ExperimentKind::sweep ? "sweep" : "stiffness");
               }}},
        {"experiment.eps_list", LIST(eps_list)},
        {"experiment.stiffness_eps_list", LIST(stiffness_eps_list)},
        {"experiment.parallel", BOOL(parallel)},
        {"output.dir",
         Entry{[](RunConfig& c, const std::string& v, const Where& w) {
                   if (v.empty()) fail(w, "output directory must not be empty");
                   c.output_dir = v;
               },
               [](const RunConfig& c) { return c.output_dir; }}},
    };
    return t;
}

#undef REAL
#undef INT
#undef BOOL
#undef LIST

const Entry* lookup(const std::string& key) {
    for (const auto& [k, e] : table())
        if (k == key) return &e;
    return nullptr;
}

/// Constraint checks; `where` maps a key to where it was last set.
void validate_config(const RunConfig& c, const std::map<std::string, int>& where) {
    auto at = [&](const std::string& key) {
        auto it = where.find(key);
        return Where{key, it == where.end() ? 0 : it->second};
    };
    if (c.eps && where.count("physics.mach"))
        fail(at("physics.eps"), "physics.eps and physics.mach are mutually exclusive");
    if (c.eps && !(*c.eps > 0.0)) fail(at("physics.eps"), "must be > 0");

    PhysicalParams p;
    try {
        p = c.params();
    } catch (const ParamError& e) {
        static const std::map<std::string, std::string> key_of = {
            {"gamma", "physics.gamma"},       {"mach", "physics.mach"},
            {"reynolds", "physics.reynolds"}, {"prandtl", "physics.prandtl"},
            {"chi", "physics.chi"},           {"viscosity", "physics.visc_ratio"},
            {"visc_ratio", "physics.visc_ratio"}};
        auto it = key_of.find(e.violation());
        std::string key = it == key_of.end() ? "physics." + e.violation() : it->second;
        if (key == "physics.mach" && c.eps) key = "physics.eps";
        fail(at(key), e.what());
    }
    Grid g;
    try {
        g = c.grid();
    } catch (const Error& e) {
        fail(at(std::string(e.what()).find("n1") != std::string::npos ? "grid.n1" : "grid.n2"),
             e.what());
    }
    try {
        build_base_flow(p, g);
    } catch (const Error& e) {
        fail(at("physics.chi"), e.what());
    }
    const SolverConfig& s = c.solver;
    if (!(s.dt > 0.0)) fail(at("solver.dt"), "must be > 0");
    if (!(s.t_end >= 0.0)) fail(at("solver.t_end"), "must be >= 0");
    if (s.t_end > 0.0 && s.t_end < s.dt) fail(at("solver.t_end"), "must be 0 or >= solver.dt");
    if (s.diag_stride < 1) fail(at("solver.diag_stride"), "must be >= 1");
    if (!(s.cfl_acoustic > 0.0)) fail(at("solver.cfl_acoustic"), "must be > 0");
    if (!(s.cfl_viscous > 0.0)) fail(at("solver.cfl_viscous"), "must be > 0");
    try {
        validate(s, p, g);
    } catch (const Error& e) {
        fail(at("solver.dt"), e.what());
    }
    for (double e : c.eps_list)
        if (!(e > 0.0 && e <= 0.5)) fail(at("experiment.eps_list"), "values must lie in (0, 0.5]");
    for (std::size_t k = 1; k < c.eps_list.size(); ++k)
        if (!(c.eps_list[k] < c.eps_list[k - 1]))
            fail(at("experiment.eps_list"), "values must be strictly decreasing");
    for (double e : c.stiffness_eps_list)
        if (!(e > 0.0)) fail(at("experiment.stiffness_eps_list"), "values must be > 0");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, e] : table()) k.push_back(key);
        return k;
    }();
    return keys;
}

ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    ParsedConfig out;
    RunConfig& c = out.config;
    std::map<std::string, int> where;
    std::vector<std::string> set_log;

    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", line_no,
                              "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Where w{key, line_no};
        const Entry* e = lookup(key);
        if (!e) fail(w, "unknown key");
        if (where.count(key)) fail(w, "duplicate key (first set on line " +
                                          std::to_string(where[key]) + ")");
        e->set(c, value, w);
        where[key] = line_no;
        set_log.push_back("set " + key + " = " + e->get(c) + " (line " + std::to_string(line_no) + ")");
    }

    std::vector<std::string> override_log;
    std::set<std::string> overridden;
    for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        const std::string key = trim(o.substr(0, eq));
        const Where w{key, -1};
        if (eq == std::string::npos) fail(w, "override must be key=value");
        const Entry* e = lookup(key);
        if (!e) fail(w, "unknown key");
        if (!overridden.insert(key).second) fail(w, "overridden twice");
        e->set(c, trim(o.substr(eq + 1)), w);
        where[key] = -1;
        override_log.push_back("override " + key + " = " + e->get(c) + " (--set)");
    }

    validate_config(c, where);

    for (const auto& [key, e] : table())
        if (!where.count(key)) out.log.push_back("default " + key + " = " + e.get(c));
    out.log.insert(out.log.end(), set_log.begin(), set_log.end());
    out.log.insert(out.log.end(), override_log.begin(), override_log.end());
    return out;
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& [key, e] : table()) {
        if (key == "physics.eps" && !c.eps) continue;
        if (key == "physics.mach" && c.eps) continue;
        out += key + " = " + e.get(c) + "\n";
    }
    return out;
}

}  // namespace couette
