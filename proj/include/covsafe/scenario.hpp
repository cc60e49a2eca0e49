#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "covsafe/density.hpp"
#include "covsafe/disturbance.hpp"
#include "covsafe/polygon.hpp"
#include "covsafe/vec2.hpp"

namespace covsafe {

enum class ControllerMode { kNominal, kCbf };

enum class DensityKind { kGaussian, kUniform };

inline const char* to_string(ControllerMode m) {
    return m == ControllerMode::kNominal ? "nominal" : "cbf";
}

// Full description of one simulation run. Loaded from a config file or built
// in code; `validate` enforces every invariant before the simulation starts.
struct ScenarioConfig {
    std::string name = "scenario";

    int n = 0;                      // agent count
    double T = 30.0;                // horizon [s]
    double dt = 0.005;              // integration step [s]
    int L = 5;                      // harmonic pairs, basis size N = 2L+1
    double r_safe = 0.25;           // safety radius [m]
    std::vector<double> theta_true; // per-agent actuator fault coefficient
    double alpha = 0.1;
    double nu = 0.1;
    double mu = 2.0;
    double E = 0.2;                 // residual bound
    double V_z = 10.0;              // neighbor speed bound
    double d_bar = 20.0;            // weight bound, shared across basis entries
    double d_max = 1.0;             // disturbance amplitude
    double k_p = 1.0;               // nominal controller gain
    ControllerMode mode = ControllerMode::kCbf;
    unsigned long seed = 0;
    double sensing_range = std::numeric_limits<double>::infinity();
    DisturbanceProfile disturbance_profile = DisturbanceProfile::kPiecewise;
    int quad_depth = kDefaultQuadDepth;

    DensityKind density_kind = DensityKind::kGaussian;
    Vec2 density_mean{1.75, 1.75};
    Vec2 density_sigma{0.3, 0.3};

    Polygon domain;
    std::vector<Vec2> initial_positions;

    std::vector<double> snapshot_times{0.0, 1.0, 10.0, 30.0};

    int basis_size() const { return 2 * L + 1; }
    long steps() const { return static_cast<long>(std::llround(T / dt)); }
};

// Throws std::invalid_argument naming the offending field.
inline void validate(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };

    if (cfg.n < 1) fail("n: need at least one agent");
    if (!(cfg.T > 0.0)) fail("T: horizon must be positive");
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.T) fail("dt: step must be in (0, T]");
    if (cfg.L < 1) fail("L: need at least one harmonic pair");
    if (!(cfg.r_safe > 0.0)) fail("r_safe: must be positive");
    if (!(cfg.alpha > 0.0) || cfg.alpha >= 1.0) fail("alpha: must lie in (0, 1)");
    if (!(cfg.nu > 0.0)) fail("nu: must be positive");
    if (!(cfg.mu > 0.0)) fail("mu: must be positive");
    if (cfg.E < 0.0) fail("E: must be non-negative");
    if (cfg.V_z < 0.0) fail("V_z: must be non-negative");
    if (!(cfg.d_bar > 0.0)) fail("d_bar: must be positive");
    if (cfg.d_max < 0.0) fail("d_max: must be non-negative");
    if (cfg.k_p < 0.0) fail("k_p: must be non-negative");
    if (!(cfg.sensing_range > 0.0)) fail("sensing_range: must be positive");
    if (cfg.quad_depth < 0 || cfg.quad_depth > 8) fail("quad_depth: must lie in [0, 8]");

    if (cfg.theta_true.size() != static_cast<std::size_t>(cfg.n)) {
        fail("theta_true: need one value per agent");
    }
    for (std::size_t i = 0; i < cfg.theta_true.size(); ++i) {
        const double th = cfg.theta_true[i];
        if (th == 0.0) {
            fail("theta_true[" + std::to_string(i) +
                 "]: a zero fault coefficient makes the agent uncontrollable");
        }
        if (th < cfg.alpha || th > 1.0) {
            fail("theta_true[" + std::to_string(i) + "]: must lie in [alpha, 1]");
        }
    }

    if (cfg.density_kind == DensityKind::kGaussian &&
        (cfg.density_sigma.x <= 0.0 || cfg.density_sigma.y <= 0.0)) {
        fail("density sigma: must be positive");
    }

    validate_domain(cfg.domain);

    if (cfg.initial_positions.size() != static_cast<std::size_t>(cfg.n)) {
        fail("positions: need one initial position per agent");
    }
    for (std::size_t i = 0; i < cfg.initial_positions.size(); ++i) {
        if (!point_in_convex(cfg.domain, cfg.initial_positions[i])) {
            fail("positions[" + std::to_string(i) + "]: not inside the domain");
        }
    }
    for (std::size_t i = 0; i < cfg.initial_positions.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.initial_positions.size(); ++j) {
            const double dist = distance(cfg.initial_positions[i], cfg.initial_positions[j]);
            if (dist <= 1e-9) {
                fail("positions: agents " + std::to_string(i) + " and " + std::to_string(j) +
                     " coincide");
            }
            if (cfg.mode == ControllerMode::kCbf && dist <= 2.0 * cfg.r_safe) {
                fail("positions: agents " + std::to_string(i) + " and " + std::to_string(j) +
                     " start with overlapping safety disks (h(0) <= 0)");
            }
        }
    }

    for (double ts : cfg.snapshot_times) {
        if (ts < 0.0 || ts > cfg.T) fail("snapshots: time outside [0, T]");
    }
}

} // namespace covsafe
