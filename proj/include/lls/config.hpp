#pragma once

#include <map>
#include <string>
#include <vector>

#include "lls/sim.hpp"

namespace lls {

/// Flat section.key = value view of an INI-style config file. '#' and ';'
/// start comments; values keep internal whitespace.
struct ConfigFile {
    std::map<std::string, std::string> values;  // "section.key" -> raw value

    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<string>");

    /// Apply a "section.key=value" override string.
    void set_override(const std::string& kv);

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    Vec2 get_vec2(const std::string& key) const;
};

/// Build and validate a scenario from a parsed config. Throws ConfigError.
ScenarioConfig scenario_from_config(const ConfigFile& cfg);

struct SweepSpec {
    std::vector<double> fig5_grid;  // alpha values for the fixed-b table
    std::vector<double> fig6_grid;  // alpha values for the fixed-q table
    double b_fixed = 1.05;
    double q_hold = 0.0144;
    double v = 0.2;
    LegParams legs;
};

SweepSpec sweep_from_config(const ConfigFile& cfg);

}  // namespace lls
