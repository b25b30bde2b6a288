#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"
#include "schedule.hpp"

namespace nhqc {

enum class ScenarioId { two_level_a, two_level_b, two_level_c, two_level_d, cyclic_cw, cyclic_ccw, custom };

inline const char* to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::two_level_a: return "two_level_a";
        case ScenarioId::two_level_b: return "two_level_b";
        case ScenarioId::two_level_c: return "two_level_c";
        case ScenarioId::two_level_d: return "two_level_d";
        case ScenarioId::cyclic_cw: return "cyclic_cw";
        case ScenarioId::cyclic_ccw: return "cyclic_ccw";
        case ScenarioId::custom: return "custom";
    }
    return "unknown";
}

inline ScenarioId parse_scenario_id(const std::string& s) {
    if (s == "two_level_a" || s == "a") return ScenarioId::two_level_a;
    if (s == "two_level_b" || s == "b") return ScenarioId::two_level_b;
    if (s == "two_level_c" || s == "c") return ScenarioId::two_level_c;
    if (s == "two_level_d" || s == "d") return ScenarioId::two_level_d;
    if (s == "cyclic_cw" || s == "cw") return ScenarioId::cyclic_cw;
    if (s == "cyclic_ccw" || s == "ccw") return ScenarioId::cyclic_ccw;
    if (s == "custom") return ScenarioId::custom;
    throw ConfigError("unknown scenario '" + s + "'");
}

inline bool is_cyclic(ScenarioId id) { return id == ScenarioId::cyclic_cw || id == ScenarioId::cyclic_ccw; }

struct ScenarioConfig {
    ScenarioId id = ScenarioId::two_level_a;
    double T = 1.0;
    double dt = 0.0;  // 0 selects T / 2000
    int loops = 2;
    double gamma_scale = 1.0;
    double omega_scale = 1.0;  // != 1 deliberately breaks the synthesized drive
    double tolerance = 1e-6;   // end-to-end population tolerance
    // custom two-level passage: theta affine from theta_start to theta_end over [0, 2T]
    double theta_start = 0.0;
    double theta_end = pi / 2.0;
    Passage passage = Passage::ket;
    std::string csv_path;
    std::string svg_path;

    double step() const { return dt > 0.0 ? dt : T / 2000.0; }

    void validate() const {
        if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive");
        if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("dt must be positive");
        if (loops < 1) throw ConfigError("loops must be >= 1");
        if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
        if (!std::isfinite(gamma_scale) || !std::isfinite(omega_scale)) throw ConfigError("scales must be finite");
        const double ratio = 2.0 * T / step();
        if (std::abs(ratio - std::round(ratio)) > 1e-7 * std::max(1.0, ratio))
            throw ConfigError("dt must divide the stage length 2T");
    }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ConfigError("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline void apply_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
    if (key == "scenario") c.id = parse_scenario_id(value);
    else if (key == "direction") {
        if (value == "cw") c.id = ScenarioId::cyclic_cw;
        else if (value == "ccw") c.id = ScenarioId::cyclic_ccw;
        else throw ConfigError("direction must be cw or ccw");
    } else if (key == "T") c.T = detail::parse_double(key, value);
    else if (key == "dt") c.dt = detail::parse_double(key, value);
    else if (key == "loops") {
        const double x = detail::parse_double(key, value);
        if (x != std::floor(x)) throw ConfigError("loops must be an integer");
        c.loops = static_cast<int>(x);
    } else if (key == "gamma_scale") c.gamma_scale = detail::parse_double(key, value);
    else if (key == "omega_scale") c.omega_scale = detail::parse_double(key, value);
    else if (key == "tolerance") c.tolerance = detail::parse_double(key, value);
    else if (key == "theta_start") c.theta_start = detail::parse_double(key, value);
    else if (key == "theta_end") c.theta_end = detail::parse_double(key, value);
    else if (key == "passage") {
        if (value == "ket") c.passage = Passage::ket;
        else if (value == "bra") c.passage = Passage::bra;
        else throw ConfigError("passage must be ket or bra");
    } else if (key == "csv") c.csv_path = value;
    else if (key == "svg") c.svg_path = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

// key = value lines; '#' starts a comment.
inline void read_config(std::istream& in, ScenarioConfig& c) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_value(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    read_config(in, base);
    return base;
}

}  // namespace nhqc
