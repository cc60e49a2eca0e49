#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "covsafe/scenario.hpp"

namespace covsafe {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct ConfigCursor {
    std::string path;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
    }
};

inline double parse_number(const std::string& tok, const ConfigCursor& at) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) at.fail("trailing characters in number '" + tok + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        at.fail("expected a number, got '" + tok + "'");
    }
}

inline std::vector<double> parse_numbers(const std::string& value, const ConfigCursor& at) {
    std::istringstream in(value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number(tok, at));
    if (out.empty()) at.fail("expected at least one number");
    return out;
}

inline Vec2 parse_point(const std::string& value, const ConfigCursor& at) {
    const std::vector<double> v = parse_numbers(value, at);
    if (v.size() != 2) at.fail("expected exactly two coordinates");
    return {v[0], v[1]};
}

} // namespace detail

// Reads the flat `key = value` scenario format. Sections group related keys:
//
//   schema = 1
//   name = paper_sec4
//   [scenario]  n, T, dt, L, r_safe, theta_true, alpha, nu, mu, E, V_z,
//               d_bar, d_max, k_p, mode, seed, sensing_range, disturbance,
//               quad_depth, snapshots
//   [density]   kind, mu_x, mu_y, sigma_x, sigma_y
//   [domain]    vertex = x y   (repeated, counter-clockwise)
//   [agents]    position = x y (repeated, one per agent)
//
// Unknown keys are errors; every ScenarioConfig invariant is checked after
// parsing. Errors carry file:line positions.
inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");

    ScenarioConfig cfg;
    cfg.domain.clear();
    cfg.snapshot_times.clear();
    std::vector<double> theta_values{};
    bool saw_schema = false;
    bool saw_snapshots = false;

    detail::ConfigCursor at{path, 0};
    std::string section;
    std::string line;
    while (std::getline(in, line)) {
        ++at.line;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "density" && section != "domain" &&
                section != "agents") {
                at.fail("unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) at.fail("empty key");
        if (value.empty()) at.fail("empty value for '" + key + "'");

        if (section.empty()) {
            if (key == "schema") {
                if (value != "1") at.fail("unsupported schema '" + value + "' (expected 1)");
                saw_schema = true;
            } else if (key == "name") {
                cfg.name = value;
            } else {
                at.fail("unknown key '" + key + "' outside sections");
            }
        } else if (section == "scenario") {
            if (key == "n") cfg.n = static_cast<int>(detail::parse_number(value, at));
            else if (key == "T") cfg.T = detail::parse_number(value, at);
            else if (key == "dt") cfg.dt = detail::parse_number(value, at);
            else if (key == "L") cfg.L = static_cast<int>(detail::parse_number(value, at));
            else if (key == "r_safe") cfg.r_safe = detail::parse_number(value, at);
            else if (key == "theta_true") theta_values = detail::parse_numbers(value, at);
            else if (key == "alpha") cfg.alpha = detail::parse_number(value, at);
            else if (key == "nu") cfg.nu = detail::parse_number(value, at);
            else if (key == "mu") cfg.mu = detail::parse_number(value, at);
            else if (key == "E") cfg.E = detail::parse_number(value, at);
            else if (key == "V_z") cfg.V_z = detail::parse_number(value, at);
            else if (key == "d_bar") cfg.d_bar = detail::parse_number(value, at);
            else if (key == "d_max") cfg.d_max = detail::parse_number(value, at);
            else if (key == "k_p") cfg.k_p = detail::parse_number(value, at);
            else if (key == "seed") cfg.seed = static_cast<unsigned long>(detail::parse_number(value, at));
            else if (key == "sensing_range") cfg.sensing_range = detail::parse_number(value, at);
            else if (key == "quad_depth") cfg.quad_depth = static_cast<int>(detail::parse_number(value, at));
            else if (key == "mode") {
                if (value == "nominal") cfg.mode = ControllerMode::kNominal;
                else if (value == "cbf") cfg.mode = ControllerMode::kCbf;
                else at.fail("mode must be 'nominal' or 'cbf', got '" + value + "'");
            } else if (key == "disturbance") {
                if (value == "piecewise") cfg.disturbance_profile = DisturbanceProfile::kPiecewise;
                else if (value == "none") cfg.disturbance_profile = DisturbanceProfile::kNone;
                else at.fail("disturbance must be 'piecewise' or 'none', got '" + value + "'");
            } else if (key == "snapshots") {
                std::string spaced = value;
                for (char& c : spaced) {
                    if (c == ',') c = ' ';
                }
                cfg.snapshot_times = detail::parse_numbers(spaced, at);
                saw_snapshots = true;
            } else {
                at.fail("unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "density") {
            if (key == "kind") {
                if (value == "gaussian") cfg.density_kind = DensityKind::kGaussian;
                else if (value == "uniform") cfg.density_kind = DensityKind::kUniform;
                else at.fail("density kind must be 'gaussian' or 'uniform', got '" + value + "'");
            } else if (key == "mu_x") cfg.density_mean.x = detail::parse_number(value, at);
            else if (key == "mu_y") cfg.density_mean.y = detail::parse_number(value, at);
            else if (key == "sigma_x") cfg.density_sigma.x = detail::parse_number(value, at);
            else if (key == "sigma_y") cfg.density_sigma.y = detail::parse_number(value, at);
            else at.fail("unknown key '" + key + "' in [density]");
        } else if (section == "domain") {
            if (key == "vertex") cfg.domain.push_back(detail::parse_point(value, at));
            else at.fail("unknown key '" + key + "' in [domain]");
        } else if (section == "agents") {
            if (key == "position") cfg.initial_positions.push_back(detail::parse_point(value, at));
            else at.fail("unknown key '" + key + "' in [agents]");
        }
    }

    at.line = 0;
    if (!saw_schema) throw ConfigError(path + ": missing required 'schema = 1'");
    if (cfg.n == 0) throw ConfigError(path + ": missing required field n");
    if (!saw_snapshots) cfg.snapshot_times = {0.0, 1.0, 10.0, 30.0};
    for (auto it = cfg.snapshot_times.begin(); it != cfg.snapshot_times.end();) {
        it = (*it > cfg.T) ? cfg.snapshot_times.erase(it) : std::next(it);
    }

    if (theta_values.empty()) {
        throw ConfigError(path + ": missing required field theta_true");
    }
    if (theta_values.size() == 1) {
        cfg.theta_true.assign(static_cast<std::size_t>(cfg.n), theta_values[0]);
    } else {
        cfg.theta_true = theta_values;
    }

    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

// FNV-1a over a canonical rendering of every config field, so the manifest
// can prove which scenario produced an artifact.
inline std::uint64_t config_checksum(const ScenarioConfig& cfg) {
    std::string canon;
    canon.reserve(1024);
    auto add = [&canon](const std::string& s) {
        canon += s;
        canon += ';';
    };
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    add(cfg.name);
    add(std::to_string(cfg.n));
    add(num(cfg.T));
    add(num(cfg.dt));
    add(std::to_string(cfg.L));
    add(num(cfg.r_safe));
    for (double th : cfg.theta_true) add(num(th));
    add(num(cfg.alpha));
    add(num(cfg.nu));
    add(num(cfg.mu));
    add(num(cfg.E));
    add(num(cfg.V_z));
    add(num(cfg.d_bar));
    add(num(cfg.d_max));
    add(num(cfg.k_p));
    add(to_string(cfg.mode));
    add(std::to_string(cfg.seed));
    add(num(cfg.sensing_range));
    add(cfg.disturbance_profile == DisturbanceProfile::kPiecewise ? "piecewise" : "none");
    add(std::to_string(cfg.quad_depth));
    add(cfg.density_kind == DensityKind::kGaussian ? "gaussian" : "uniform");
    add(num(cfg.density_mean.x));
    add(num(cfg.density_mean.y));
    add(num(cfg.density_sigma.x));
    add(num(cfg.density_sigma.y));
    for (const Vec2& v : cfg.domain) {
        add(num(v.x));
        add(num(v.y));
    }
    for (const Vec2& v : cfg.initial_positions) {
        add(num(v.x));
        add(num(v.y));
    }
    for (double ts : cfg.snapshot_times) add(num(ts));

    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : canon) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

struct RunManifest {
    std::string scenario;
    std::uint64_t checksum = 0;
    std::string mode;
    std::vector<std::string> outputs;
    bool safety_pass = false;
    double duration_seconds = 0.0;
};

inline std::string manifest_text(const RunManifest& m) {
    std::ostringstream out;
    char sum[32];
    std::snprintf(sum, sizeof(sum), "%016llx", static_cast<unsigned long long>(m.checksum));
    out << "scenario = " << m.scenario << "\n";
    out << "checksum = " << sum << "\n";
    out << "mode = " << m.mode << "\n";
    for (const std::string& o : m.outputs) out << "output = " << o << "\n";
    out << "safety = " << (m.safety_pass ? "pass" : "fail") << "\n";
    char dur[40];
    std::snprintf(dur, sizeof(dur), "%.3f", m.duration_seconds);
    out << "duration_seconds = " << dur << "\n";
    return out.str();
}

} // namespace covsafe
