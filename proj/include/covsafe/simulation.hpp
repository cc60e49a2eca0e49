#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "covsafe/adaptation.hpp"
#include "covsafe/density.hpp"
#include "covsafe/disturbance.hpp"
#include "covsafe/fourier_basis.hpp"
#include "covsafe/safety_filter.hpp"
#include "covsafe/scenario.hpp"
#include "covsafe/voronoi.hpp"

namespace covsafe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Nominal coverage law: drive toward the density-weighted cell centroid.
inline Vec2 nominal_controller(const Vec2& p, const Vec2& centroid, double k_p) {
    return -k_p * (p - centroid);
}

// Explicit Euler step of p dot = theta u + d.
inline Vec2 apply_dynamics(const Vec2& p, const Vec2& u_applied, double theta_true, const Vec2& d_t,
                           double dt) {
    return p + dt * (theta_true * u_applied + d_t);
}

inline double min_pairwise_distance(const std::vector<Vec2>& positions) {
    if (positions.size() < 2) {
        throw std::invalid_argument("min_pairwise_distance: need at least two agents");
    }
    double best = kInf;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            best = std::min(best, distance(positions[i], positions[j]));
        }
    }
    return best;
}

// Nearest other agent within the sensing range; -1 when none. Ties resolve to
// the lowest index so runs are reproducible.
inline int nearest_neighbor(const std::vector<Vec2>& positions, std::size_t i,
                            double sensing_range) {
    int best = -1;
    double best_dist = kInf;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (j == i) continue;
        const double d = distance(positions[i], positions[j]);
        if (d <= sensing_range && d < best_dist) {
            best = static_cast<int>(j);
            best_dist = d;
        }
    }
    return best;
}

struct AgentRecord {
    Vec2 p;
    Vec2 u_nom;
    Vec2 u;
    double h = kInf;    // +inf when no neighbor is sensed
    double hbar = kInf; // certificate value; +inf when no neighbor
    double theta_hat_norm = 0.0;
    double dhat_max_norm = 0.0;
    int neighbor = -1;
};

struct StepRecord {
    double t = 0.0;
    std::vector<AgentRecord> agents;
    double min_dist = kInf; // +inf when n == 1
    double H_cost = 0.0;
};

enum class AbortReason { kNone, kCoincidentAgents, kInfeasibleQp };

struct RunResult {
    std::vector<StepRecord> records;
    bool aborted = false;
    AbortReason abort_reason = AbortReason::kNone;
    long abort_step = -1;
    int abort_agent = -1;
    std::string abort_message;

    std::vector<AdaptationGains> gains;   // per agent, cbf mode with n >= 2
    std::vector<Vec2> reference_weights;  // weights behind the hbar diagnostic
    long neighbor_switches = 0;
};

namespace detail {

// Solves the SPD system A w = rhs in place (Cholesky). Small N only.
inline std::vector<double> solve_spd(std::vector<std::vector<double>> A, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t k = 0; k < n; ++k) {
        double diag = A[k][k];
        for (std::size_t m = 0; m < k; ++m) diag -= A[k][m] * A[k][m];
        if (diag <= 0.0) throw std::runtime_error("solve_spd: matrix not positive definite");
        A[k][k] = std::sqrt(diag);
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = A[i][k];
            for (std::size_t m = 0; m < k; ++m) v -= A[i][m] * A[k][m];
            A[i][k] = v / A[k][k];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t m = 0; m < i; ++m) v -= A[i][m] * rhs[m];
        rhs[i] = v / A[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = rhs[ii];
        for (std::size_t m = ii + 1; m < n; ++m) v -= A[m][ii] * rhs[m];
        rhs[ii] = v / A[ii][ii];
    }
    return rhs;
}

} // namespace detail

// Least-squares fit of the scenario disturbance onto the basis over a uniform
// 3001-point grid. The disturbance is identical in x and y, so each weight is
// a diagonal 2-vector. These are the reference values the hbar diagnostic
// treats as the true weights.
inline std::vector<Vec2> fit_reference_weights(const FourierBasis& basis, double T, double d_max,
                                               DisturbanceProfile profile) {
    const std::size_t n = static_cast<std::size_t>(basis.size());
    if (profile == DisturbanceProfile::kNone || d_max == 0.0) {
        return std::vector<Vec2>(n);
    }
    constexpr int kGridPoints = 3001;
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    for (int m = 0; m < kGridPoints; ++m) {
        const double t = T * static_cast<double>(m) / (kGridPoints - 1);
        const std::vector<double> psi = basis.eval(t);
        const double s = disturbance(t, T, d_max, profile).x;
        for (std::size_t a = 0; a < n; ++a) {
            rhs[a] += psi[a] * s;
            for (std::size_t b = 0; b < n; ++b) gram[a][b] += psi[a] * psi[b];
        }
    }
    const std::vector<double> w = detail::solve_spd(std::move(gram), std::move(rhs));
    std::vector<Vec2> weights(n);
    for (std::size_t j = 0; j < n; ++j) weights[j] = {w[j], w[j]};
    return weights;
}

namespace detail {

template <DensityFn F>
RunResult run_scenario_impl(const ScenarioConfig& cfg, const F& density) {
    const std::size_t n = static_cast<std::size_t>(cfg.n);
    const long steps = cfg.steps();
    const bool cbf = cfg.mode == ControllerMode::kCbf;
    const bool filtered = cbf && n >= 2;

    RunResult result;
    result.records.reserve(static_cast<std::size_t>(steps));

    std::vector<Vec2> positions = cfg.initial_positions;

    FourierBasis basis(cfg.L, cfg.T);
    std::vector<AdaptiveState> states;
    std::vector<double> theta_star(n, 0.0);
    const std::vector<double> d_bar_vec(static_cast<std::size_t>(basis.size()), cfg.d_bar);

    if (filtered) {
        result.reference_weights =
            fit_reference_weights(basis, cfg.T, cfg.d_max, cfg.disturbance_profile);
        states.assign(n, AdaptiveState(static_cast<std::size_t>(basis.size())));
        result.gains.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Gains come from the initial barrier value against the nearest
            // other agent, independent of the sensing range.
            double nearest = kInf;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) nearest = std::min(nearest, distance(positions[i], positions[j]));
            }
            const double h0 = nearest * nearest - 4.0 * cfg.r_safe * cfg.r_safe;
            result.gains.push_back(select_gains(h0, states[i].theta_hat, states[i].d_hat, cfg.mu,
                                                cfg.alpha, cfg.nu, d_bar_vec));
            theta_star[i] = cfg.theta_true[i] - 0.5 * (1.0 + cfg.alpha);
        }
    }

    std::vector<int> prev_neighbor(n, -1);
    std::vector<Vec2> grads(n);
    std::vector<Vec2> inputs(n);

    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (distance(positions[i], positions[j]) <= kVertexMergeTol) {
                    result.aborted = true;
                    result.abort_reason = AbortReason::kCoincidentAgents;
                    result.abort_step = k;
                    result.abort_agent = static_cast<int>(i);
                    result.abort_message = "agents " + std::to_string(i) + " and " +
                                           std::to_string(j) + " coincide at t=" +
                                           std::to_string(t);
                    return result;
                }
            }
        }

        const std::vector<Polygon> cells = voronoi_partition(cfg.domain, positions);

        StepRecord rec;
        rec.t = t;
        rec.agents.resize(n);
        rec.H_cost = 0.0;

        std::vector<Vec2> centroids(n);
        std::vector<bool> has_centroid(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (cells[i].size() >= 3 && polygon_area(cells[i]) > 0.0) {
                const CellMoments m = cell_moments(cells[i], density, positions[i], cfg.quad_depth);
                // Mass can underflow to zero far from the density peak; such
                // cells carry no usable gradient information.
                if (m.mass > 0.0) {
                    centroids[i] = m.first / m.mass;
                    has_centroid[i] = true;
                    rec.H_cost += m.second_about;
                }
            }
        }

        if (n >= 2) rec.min_dist = min_pairwise_distance(positions);

        const std::vector<double> psi = filtered ? basis.eval(t) : std::vector<double>{};

        for (std::size_t i = 0; i < n; ++i) {
            AgentRecord& ar = rec.agents[i];
            ar.p = positions[i];
            ar.u_nom = has_centroid[i] ? nominal_controller(positions[i], centroids[i], cfg.k_p)
                                       : Vec2{};
            ar.u = ar.u_nom;
            ar.neighbor = n >= 2 ? nearest_neighbor(positions, i, cfg.sensing_range) : -1;
            grads[i] = Vec2{};

            if (ar.neighbor >= 0) {
                const BarrierEvaluation be =
                    barrier(positions[i], positions[static_cast<std::size_t>(ar.neighbor)],
                            cfg.r_safe, cfg.E, cfg.V_z, ar.neighbor);
                ar.h = be.h;
                ar.hbar = be.h;
                if (filtered) {
                    if (be.degenerate) {
                        result.aborted = true;
                        result.abort_reason = AbortReason::kCoincidentAgents;
                        result.abort_step = k;
                        result.abort_agent = static_cast<int>(i);
                        result.abort_message = "collision event: agent " + std::to_string(i) +
                                               " coincides with its neighbor at t=" +
                                               std::to_string(t);
                        return result;
                    }
                    grads[i] = be.grad_p;
                    const LinearConstraint con =
                        assemble_constraint(be, states[i], result.gains[i], psi, cfg.alpha);
                    if (dot(con.a, con.a) == 0.0 && con.b < 0.0) {
                        result.aborted = true;
                        result.abort_reason = AbortReason::kInfeasibleQp;
                        result.abort_step = k;
                        result.abort_agent = static_cast<int>(i);
                        result.abort_message =
                            "infeasible barrier constraint for agent " + std::to_string(i) +
                            " at t=" + std::to_string(t);
                        return result;
                    }
                    ar.u = solve_cbf_qp(ar.u_nom, con);

                    std::vector<Vec2> d_err(states[i].d_hat.size());
                    for (std::size_t j = 0; j < d_err.size(); ++j) {
                        d_err[j] = result.reference_weights[j] - states[i].d_hat[j];
                    }
                    ar.hbar = hbar_diagnostic(be.h, theta_star[i] - states[i].theta_hat, d_err,
                                              result.gains[i]);
                }
                if (prev_neighbor[i] >= 0 && prev_neighbor[i] != ar.neighbor) {
                    ++result.neighbor_switches;
                }
            }
            prev_neighbor[i] = ar.neighbor;

            if (filtered) {
                ar.theta_hat_norm = std::abs(states[i].theta_hat);
                double dn = 0.0;
                for (const Vec2& dj : states[i].d_hat) dn = std::max(dn, norm(dj));
                ar.dhat_max_norm = dn;
            }
            inputs[i] = ar.u;
        }

        // Synchronous state commit: estimates first (they use inputs at t),
        // then positions.
        if (filtered) {
            for (std::size_t i = 0; i < n; ++i) {
                step_estimates(states[i], grads[i], inputs[i], psi, result.gains[i], cfg.dt);
            }
        }
        const Vec2 d_t = disturbance(t, cfg.T, cfg.d_max, cfg.disturbance_profile);
        for (std::size_t i = 0; i < n; ++i) {
            positions[i] = apply_dynamics(positions[i], inputs[i], cfg.theta_true[i], d_t, cfg.dt);
        }

        result.records.push_back(std::move(rec));
    }
    return result;
}

} // namespace detail

// Runs the full scenario: tessellate, evaluate the nominal law, filter it in
// cbf mode, advance estimates and positions with explicit Euler steps, and
// record one StepRecord per step. Identical configs produce identical traces.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    if (cfg.density_kind == DensityKind::kGaussian) {
        return detail::run_scenario_impl(cfg, GaussianDensity(cfg.density_mean, cfg.density_sigma));
    }
    return detail::run_scenario_impl(cfg, UniformDensity{});
}

} // namespace covsafe
