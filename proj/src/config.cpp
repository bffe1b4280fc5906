#include "lls/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lls/errors.hpp"

namespace lls {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    const std::size_t pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str(), path);
}

void ConfigFile::set_override(const std::string& kv) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + kv);
    const std::string key = trim(kv.substr(0, eq));
    if (key.empty()) throw ConfigError("override has empty key: " + kv);
    values[key] = trim(kv.substr(eq + 1));
}

std::string ConfigFile::get_str(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string ConfigFile::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ConfigFile::get_num(const std::string& key) const {
    const std::string v = get_str(key);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key " + key + " is not a number: '" + v + "'");
}

double ConfigFile::get_num(const std::string& key, double fallback) const {
    return has(key) ? get_num(key) : fallback;
}

long ConfigFile::get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double x = get_num(key);
    const long n = static_cast<long>(x);
    if (static_cast<double>(n) != x) throw ConfigError("config key " + key + " must be an integer");
    return n;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_str(key);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError("config key " + key + " must be a boolean: '" + v + "'");
}

Vec2 ConfigFile::get_vec2(const std::string& key) const {
    const std::string v = get_str(key);
    std::istringstream ss(v);
    double x, y;
    if (!(ss >> x >> y)) throw ConfigError("config key " + key + " must be two numbers: '" + v + "'");
    std::string rest;
    if (ss >> rest) throw ConfigError("config key " + key + " has trailing content: '" + v + "'");
    return {x, y};
}

namespace {

CurveModel curve_from(const ConfigFile& cfg) {
    const std::string kind = cfg.get_str("curve.kind");
    if (kind == "circle") {
        const double radius = cfg.get_num("curve.radius");
        if (!(radius > 0.0)) throw ConfigError("curve.radius must be positive");
        return CurveModel::circle(cfg.get_vec2("curve.center"), radius);
    }
    if (kind == "line") {
        const Vec2 dir = cfg.get_vec2("curve.direction");
        if (dir.norm() < 1e-12) throw ConfigError("curve.direction must be nonzero");
        return CurveModel::line(cfg.get_vec2("curve.point"), dir);
    }
    throw ConfigError("curve.kind must be 'circle' or 'line'");
}

LegParams legs_from(const ConfigFile& cfg) {
    LegParams legs;
    legs.mass = cfg.get_num("legs.mass");
    legs.inertia = cfg.get_num("legs.inertia", 2.0e-7);
    legs.eta0 = cfg.get_num("legs.eta0");
    legs.alpha_min = cfg.get_num("legs.alpha_min");
    legs.alpha_max = cfg.get_num("legs.alpha_max");
    legs.validate();
    return legs;
}

}  // namespace

ScenarioConfig scenario_from_config(const ConfigFile& cfg) {
    ScenarioConfig sc;
    sc.curve = curve_from(cfg);
    sc.legs = legs_from(cfg);

    sc.start = cfg.get_vec2("start.position");
    sc.speed = cfg.get_num("start.speed");
    sc.heading = cfg.get_num("start.heading");
    const std::string side = cfg.get_str("start.first_side", "right");
    if (side == "right") sc.first_side = Side::Right;
    else if (side == "left") sc.first_side = Side::Left;
    else throw ConfigError("start.first_side must be 'right' or 'left'");
    sc.body0.sigma = cfg.get_num("start.sigma", sc.heading);
    sc.body0.p_sigma = cfg.get_num("start.p_sigma", 0.0);

    sc.tracking.K = cfg.get_num("tracking.K");
    sc.tracking.rho_c = cfg.get_num("tracking.rho_c");
    sc.tracking.adaptive = cfg.get_bool("tracking.adaptive_gain", true);

    sc.posture.C1 = cfg.get_num("posture.C1", 0.0);
    sc.posture.C2 = cfg.get_num("posture.C2", 0.0);
    sc.posture.K4 = cfg.get_num("posture.K4", 0.5);
    sc.posture.K5 = cfg.get_num("posture.K5", 0.5);

    const std::string strategy = cfg.get_str("control.strategy", "constant-q");
    if (strategy == "inverse") sc.strategy = Strategy::Inverse;
    else if (strategy == "approx") sc.strategy = Strategy::Approx;
    else if (strategy == "constant-q") sc.strategy = Strategy::ConstantQ;
    else throw ConfigError("control.strategy must be inverse | approx | constant-q");
    sc.q_target = cfg.get_num("control.q_target");
    sc.eta_td = cfg.get_num("control.eta_td", 0.0);

    sc.stance_budget = static_cast<int>(cfg.get_int("run.stance_budget", 60));
    sc.convergence_tol = cfg.get_num("run.convergence_tol", 0.0);
    sc.convergence_consecutive = static_cast<int>(cfg.get_int("run.convergence_consecutive", 3));
    sc.stop_on_convergence = cfg.get_bool("run.stop_on_convergence", true);
    sc.integrate.rel_tol = cfg.get_num("run.ode_rel_tol", 1e-12);
    sc.integrate.record_trajectory = cfg.get_bool("run.record_trajectory", false);
    sc.body_shadow = cfg.get_bool("run.body_channel", true);

    sc.validate();
    return sc;
}

SweepSpec sweep_from_config(const ConfigFile& cfg) {
    SweepSpec sp;
    sp.legs = legs_from(cfg);
    sp.v = cfg.get_num("sweep.speed", 0.2);
    sp.b_fixed = cfg.get_num("sweep.b_fixed");
    sp.q_hold = cfg.get_num("sweep.q_hold");

    const auto grid = [&](const std::string& prefix, double lo_def, double hi_def) {
        const double lo = cfg.get_num(prefix + "_alpha_lo", lo_def);
        const double hi = cfg.get_num(prefix + "_alpha_hi", hi_def);
        const long n = cfg.get_int(prefix + "_samples", 101);
        if (n < 2 || !(lo < hi)) throw ConfigError("bad sweep grid for " + prefix);
        std::vector<double> g(n);
        for (long i = 0; i < n; ++i)
            g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        return g;
    };
    sp.fig5_grid = grid("sweep.fig5", 0.02, kPi / 2 - 0.02);
    sp.fig6_grid = grid("sweep.fig6", kPi / 6, kPi / 3);
    if (sp.fig5_grid.empty() || sp.fig6_grid.empty()) throw ConfigError("empty sweep grid");
    return sp;
}

}  // namespace lls
