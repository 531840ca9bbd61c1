#include "telegraph/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "telegraph/error.hpp"

namespace telegraph {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end)
        throw Error(ErrorCode::ConfigError, key, "not a number: '" + v + "'");
    return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    // accepts 1000000 as well as 1e6
    const double d = parse_double(key, v);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19)
        throw Error(ErrorCode::ConfigError, key, "not a non-negative integer: '" + v + "'");
    return static_cast<std::uint64_t>(d);
}

int parse_int(const std::string& key, const std::string& v) {
    const std::uint64_t n = parse_count(key, v);
    if (n > 1'000'000'000) throw Error(ErrorCode::ConfigError, key, "too large: '" + v + "'");
    return static_cast<int>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ConfigError, key, "not a boolean: '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& item : split(v, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw Error(ErrorCode::ConfigError, key, "empty list");
    return out;
}

std::vector<Atom> parse_atoms(const std::string& key, const std::string& v) {
    std::vector<Atom> atoms;
    for (const std::string& item : split(v, ';')) {
        const auto parts = split(item, ',');
        if (parts.size() != 3)
            throw Error(ErrorCode::ConfigError, key, "atom must be 'weight, position, regime': '" + item + "'");
        const double regime = parse_double(key, parts[2]);
        if (regime != 0.0 && regime != 1.0) throw Error(ErrorCode::ConfigError, key, "regime must be 0 or 1");
        atoms.push_back({parse_double(key, parts[0]), parse_double(key, parts[1]),
                         regime == 0.0 ? Regime::Down : Regime::Up});
    }
    return atoms;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_number(v[i]);
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["model.mu0"] = [](RunConfig& c, auto& k, auto& v) { c.params.mu0 = parse_double(k, v); };
        t["model.mu1"] = [](RunConfig& c, auto& k, auto& v) { c.params.mu1 = parse_double(k, v); };
        t["model.lambda0"] = [](RunConfig& c, auto& k, auto& v) { c.params.lambda0 = parse_double(k, v); };
        t["model.lambda1"] = [](RunConfig& c, auto& k, auto& v) { c.params.lambda1 = parse_double(k, v); };
        t["model.B"] = [](RunConfig& c, auto& k, auto& v) { c.params.B = parse_double(k, v); };
        t["init.atoms"] = [](RunConfig& c, auto& k, auto& v) { c.atoms = parse_atoms(k, v); };
        t["sim.paths"] = [](RunConfig& c, auto& k, auto& v) { c.sim.paths = parse_count(k, v); };
        t["sim.seed"] = [](RunConfig& c, auto& k, auto& v) { c.sim.seed = parse_count(k, v); };
        t["sim.workers"] = [](RunConfig& c, auto& k, auto& v) { c.sim.workers = static_cast<unsigned>(parse_int(k, v)); };
        t["sim.t_max"] = [](RunConfig& c, auto& k, auto& v) { c.sim.t_max = parse_double(k, v); };
        t["pde.nx"] = [](RunConfig& c, auto& k, auto& v) { c.pde.nx = parse_int(k, v); };
        t["pde.cfl"] = [](RunConfig& c, auto& k, auto& v) { c.pde.cfl = parse_double(k, v); };
        t["pde.t_max"] = [](RunConfig& c, auto& k, auto& v) { c.pde.t_max = parse_double(k, v); };
        t["transform.ilt_method"] = [](RunConfig& c, auto&, auto& v) { c.transform.ilt.method = parse_ilt_method(v); };
        t["transform.terms"] = [](RunConfig& c, auto& k, auto& v) { c.transform.ilt.terms = parse_int(k, v); };
        t["transform.precision_bits"] = [](RunConfig& c, auto& k, auto& v) {
            c.transform.ilt.precision_bits = parse_int(k, v);
        };
        t["transform.cross_check"] = [](RunConfig& c, auto&, auto& v) {
            if (v == "none") c.transform.ilt.cross_check.reset();
            else c.transform.ilt.cross_check = parse_ilt_method(v);
        };
        t["transform.cross_check_terms"] = [](RunConfig& c, auto& k, auto& v) {
            c.transform.ilt.cross_check_terms = parse_int(k, v);
        };
        t["transform.m_values"] = [](RunConfig& c, auto& k, auto& v) { c.transform.m_values = parse_list(k, v); };
        t["transform.xi_values"] = [](RunConfig& c, auto& k, auto& v) { c.transform.xi_values = parse_list(k, v); };
        t["transform.reconstruct_terms"] = [](RunConfig& c, auto& k, auto& v) {
            c.transform.reconstruct_terms = parse_int(k, v);
        };
        t["output.dir"] = [](RunConfig& c, auto&, auto& v) { c.output.dir = v; };
        t["output.times"] = [](RunConfig& c, auto& k, auto& v) { c.output.times = parse_list(k, v); };
        t["output.grid_points"] = [](RunConfig& c, auto& k, auto& v) { c.output.grid_points = parse_int(k, v); };
        t["output.series_step"] = [](RunConfig& c, auto& k, auto& v) { c.output.series_step = parse_double(k, v); };
        t["output.svg"] = [](RunConfig& c, auto& k, auto& v) { c.output.svg = parse_bool(k, v); };
        t["acceptance.paths"] = [](RunConfig& c, auto& k, auto& v) { c.acceptance.paths = parse_count(k, v); };
        t["acceptance.nx"] = [](RunConfig& c, auto& k, auto& v) { c.acceptance.pde_nx = parse_int(k, v); };
        t["acceptance.tol_field"] = [](RunConfig& c, auto& k, auto& v) { c.acceptance.tol_field = parse_double(k, v); };
        t["acceptance.z_gate"] = [](RunConfig& c, auto& k, auto& v) { c.acceptance.z_gate = parse_double(k, v); };
        t["acceptance.ode_fraction"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.ode_fraction = parse_double(k, v);
        };
        t["acceptance.tol_rel_transform"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.tol_rel_transform = parse_double(k, v);
        };
        t["acceptance.tol_rel_L"] = [](RunConfig& c, auto& k, auto& v) { c.acceptance.tol_rel_L = parse_double(k, v); };
        t["acceptance.tol_abs_L_xi0"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.tol_abs_L_xi0 = parse_double(k, v);
        };
        t["acceptance.tol_reconstruct"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.tol_reconstruct = parse_double(k, v);
        };
        t["acceptance.order_band"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.order_band = parse_double(k, v);
        };
        t["acceptance.draws_roots"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.draws_roots = parse_int(k, v);
        };
        t["acceptance.draws_identities"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.draws_identities = parse_int(k, v);
        };
        t["acceptance.series_step"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.series_step = parse_double(k, v);
        };
        t["acceptance.criteria"] = [](RunConfig& c, auto& k, auto& v) {
            c.acceptance.criteria.clear();
            if (v == "all") return;
            for (double id : parse_list(k, v)) c.acceptance.criteria.push_back(static_cast<int>(id));
        };
        return t;
    }();
    return table;
}

void validate(const RunConfig& c) {
    validate_params(c.params, Validation::Relaxed);
    c.initial_condition();
    if (c.sim.paths == 0) throw Error(ErrorCode::ZeroPaths, "sim.paths", "need at least one path");
    if (!(c.sim.t_max > 0.0)) throw Error(ErrorCode::ConfigError, "sim.t_max", "must be positive");
    if (c.pde.nx < 16) throw Error(ErrorCode::EmptyGrid, "pde.nx", "need nx >= 16");
    if (!(c.pde.cfl > 0.0 && c.pde.cfl <= 1.0)) throw Error(ErrorCode::CflViolation, "pde.cfl", "need 0 < cfl <= 1");
    if (!(c.pde.t_max > 0.0)) throw Error(ErrorCode::ConfigError, "pde.t_max", "must be positive");
    validate(c.transform.ilt);
    if (c.transform.reconstruct_terms < 1)
        throw Error(ErrorCode::ConfigError, "transform.reconstruct_terms", "need at least one mode");
    for (double m : c.transform.m_values)
        if (!(m > 0.0) || !std::isfinite(m))
            throw Error(ErrorCode::ConfigError, "transform.m_values", "m values must be positive");
    if (c.output.grid_points < 2) throw Error(ErrorCode::EmptyGrid, "output.grid_points", "need at least 2 points");
    if (!(c.output.series_step > 0.0))
        throw Error(ErrorCode::ConfigError, "output.series_step", "must be positive");
    if (!std::is_sorted(c.output.times.begin(), c.output.times.end()) || c.output.times.front() < 0.0)
        throw Error(ErrorCode::ConfigError, "output.times", "times must be sorted and non-negative");
    for (int id : c.acceptance.criteria)
        if (id < 1 || id > 10) throw Error(ErrorCode::ConfigError, "acceptance.criteria", "criteria are 1..10");
}

}  // namespace

PdeConfig RunConfig::pde_config() const {
    PdeConfig pc;
    pc.nx = pde.nx;
    pc.cfl = pde.cfl;
    pc.t_max = pde.t_max;
    for (double t : output.times)
        if (t <= pde.t_max) pc.snapshot_times.push_back(t);
    return pc;
}

AcceptanceConfig RunConfig::acceptance_config() const {
    AcceptanceConfig a = acceptance;
    a.params = params;
    a.atoms = atoms;
    a.seed = sim.seed;
    a.workers = sim.workers;
    a.ilt = transform.ilt;
    return a;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw Error(ErrorCode::ConfigError, key, "unknown key");
        if (!seen.insert(key).second) throw Error(ErrorCode::ConfigError, key, "duplicate key");
        if (value.empty()) throw Error(ErrorCode::ConfigError, key, "empty value");
        it->second(cfg, key, value);
    }
    for (const char* key : {"model.mu0", "model.mu1", "model.lambda0", "model.lambda1", "model.B", "init.atoms"})
        if (!seen.count(key)) throw Error(ErrorCode::ConfigError, key, "missing required key");
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, path, "cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string normalized(const RunConfig& c) {
    std::ostringstream o;
    auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
    const auto n = [](double v) { return format_number(v); };
    kv("model.mu0", n(c.params.mu0));
    kv("model.mu1", n(c.params.mu1));
    kv("model.lambda0", n(c.params.lambda0));
    kv("model.lambda1", n(c.params.lambda1));
    kv("model.B", n(c.params.B));
    std::string atoms;
    for (std::size_t i = 0; i < c.atoms.size(); ++i)
        atoms += (i ? "; " : "") + n(c.atoms[i].weight) + ", " + n(c.atoms[i].position) + ", " +
                 std::to_string(index(c.atoms[i].regime));
    kv("init.atoms", atoms);
    kv("sim.paths", std::to_string(c.sim.paths));
    kv("sim.seed", std::to_string(c.sim.seed));
    kv("sim.workers", std::to_string(c.sim.workers));
    kv("sim.t_max", n(c.sim.t_max));
    kv("pde.nx", std::to_string(c.pde.nx));
    kv("pde.cfl", n(c.pde.cfl));
    kv("pde.t_max", n(c.pde.t_max));
    kv("transform.ilt_method", to_string(c.transform.ilt.method));
    kv("transform.terms", std::to_string(c.transform.ilt.terms));
    kv("transform.precision_bits", std::to_string(c.transform.ilt.precision_bits));
    kv("transform.cross_check", c.transform.ilt.cross_check ? to_string(*c.transform.ilt.cross_check) : "none");
    kv("transform.cross_check_terms", std::to_string(c.transform.ilt.cross_check_terms));
    kv("transform.m_values", join(c.transform.m_values));
    kv("transform.xi_values", join(c.transform.xi_values));
    kv("transform.reconstruct_terms", std::to_string(c.transform.reconstruct_terms));
    kv("output.dir", c.output.dir);
    kv("output.times", join(c.output.times));
    kv("output.grid_points", std::to_string(c.output.grid_points));
    kv("output.series_step", n(c.output.series_step));
    kv("output.svg", c.output.svg ? "true" : "false");
    const AcceptanceConfig& a = c.acceptance;
    kv("acceptance.paths", std::to_string(a.paths));
    kv("acceptance.nx", std::to_string(a.pde_nx));
    kv("acceptance.tol_field", n(a.tol_field));
    kv("acceptance.z_gate", n(a.z_gate));
    kv("acceptance.ode_fraction", n(a.ode_fraction));
    kv("acceptance.tol_rel_transform", n(a.tol_rel_transform));
    kv("acceptance.tol_rel_L", n(a.tol_rel_L));
    kv("acceptance.tol_abs_L_xi0", n(a.tol_abs_L_xi0));
    kv("acceptance.tol_reconstruct", n(a.tol_reconstruct));
    kv("acceptance.order_band", n(a.order_band));
    kv("acceptance.draws_roots", std::to_string(a.draws_roots));
    kv("acceptance.draws_identities", std::to_string(a.draws_identities));
    kv("acceptance.series_step", n(a.series_step));
    std::string crit;
    for (std::size_t i = 0; i < a.criteria.size(); ++i) crit += (i ? ", " : "") + std::to_string(a.criteria[i]);
    kv("acceptance.criteria", a.criteria.empty() ? "all" : crit);
    return o.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    RunConfig hashed = cfg;
    hashed.output.dir.clear();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : normalized(hashed)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace telegraph
