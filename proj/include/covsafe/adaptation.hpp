#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "covsafe/projection.hpp"
#include "covsafe/vec2.hpp"

namespace covsafe {

// Adaptive estimates owned by one agent: scalar fault-estimate offset and one
// disturbance-weight 2-vector per basis function.
struct AdaptiveState {
    double theta_hat = 0.0;
    std::vector<Vec2> d_hat;

    explicit AdaptiveState(std::size_t basis_size = 0) : d_hat(basis_size) {}
};

// Certificate weights and the constants shared by the update laws. theta_bar
// = (1 - alpha)/2; the projection bound pairs are (theta_bar, alpha/2) for
// theta_hat and (d_bar_j, nu) for each weight.
struct AdaptationGains {
    double K = 0.0;
    std::vector<double> Q;
    double mu = 0.0;
    double alpha = 0.0;
    double nu = 0.0;
    std::vector<double> d_bar;
    double theta_bar = 0.0;

    double theta_limit() const { return theta_bar + 0.5 * alpha; }
    double d_limit(std::size_t j) const { return d_bar[j] + nu; }
};

// Admissible gains from the initial barrier value:
//   K  <= h0 / (2 (|theta_hat0| + theta_bar)^2)
//   Qj <= h0 / (2 N (||d_hat0_j|| + d_bar_j)^2)
// taken at `margin` times the bound. Requires h0 > 0 (agent starts safe).
inline AdaptationGains select_gains(double h0, double theta_hat0, const std::vector<Vec2>& d_hat0,
                                    double mu, double alpha, double nu,
                                    const std::vector<double>& d_bar, double margin = 0.99) {
    if (h0 <= 0.0) {
        throw std::invalid_argument("select_gains: initial barrier value must be positive");
    }
    if (d_hat0.size() != d_bar.size()) {
        throw std::invalid_argument("select_gains: d_hat0/d_bar size mismatch");
    }
    AdaptationGains g;
    g.mu = mu;
    g.alpha = alpha;
    g.nu = nu;
    g.d_bar = d_bar;
    g.theta_bar = 0.5 * (1.0 - alpha);
    const double tb = std::abs(theta_hat0) + g.theta_bar;
    g.K = margin * h0 / (2.0 * tb * tb);
    const double n = static_cast<double>(d_bar.size());
    g.Q.resize(d_bar.size());
    for (std::size_t j = 0; j < d_bar.size(); ++j) {
        const double db = norm(d_hat0[j]) + d_bar[j];
        g.Q[j] = margin * h0 / (2.0 * n * db * db);
    }
    return g;
}

// Projected rate of the fault estimate:
//   Proj(theta_hat, -(1/2K) (dh/dp)' u - (mu/2) theta_hat, l_theta).
inline double theta_update_rhs(const AdaptiveState& state, const Vec2& grad_h_p, const Vec2& u,
                               const AdaptationGains& g) {
    const double raw = -dot(grad_h_p, u) / (2.0 * g.K) - 0.5 * g.mu * state.theta_hat;
    return proj(state.theta_hat, raw, g.theta_bar, 0.5 * g.alpha);
}

// Projected rates of the disturbance weights:
//   Proj(d_hat_j, -(1/2Qj) (dh/dp) psi_j - (mu/2) d_hat_j, l_d)  for each j.
inline std::vector<Vec2> d_update_rhs(const AdaptiveState& state, const Vec2& grad_h_p,
                                      const std::vector<double>& psi, const AdaptationGains& g) {
    if (psi.size() != state.d_hat.size()) {
        throw std::invalid_argument("d_update_rhs: basis/state size mismatch");
    }
    std::vector<Vec2> rates(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const Vec2 raw = -(psi[j] / (2.0 * g.Q[j])) * grad_h_p - 0.5 * g.mu * state.d_hat[j];
        rates[j] = proj(state.d_hat[j], raw, g.d_bar[j], g.nu);
    }
    return rates;
}

// Explicit step of both estimates followed by the radial re-projection that
// keeps the l <= 1 bounds exact in discrete time.
inline void step_estimates(AdaptiveState& state, const Vec2& grad_h_p, const Vec2& u,
                           const std::vector<double>& psi, const AdaptationGains& g, double dt) {
    const double theta_rate = theta_update_rhs(state, grad_h_p, u, g);
    const std::vector<Vec2> d_rates = d_update_rhs(state, grad_h_p, psi, g);
    state.theta_hat = clamp_to_bound(state.theta_hat + dt * theta_rate, g.theta_bar, 0.5 * g.alpha);
    for (std::size_t j = 0; j < state.d_hat.size(); ++j) {
        state.d_hat[j] = clamp_to_bound(state.d_hat[j] + dt * d_rates[j], g.d_bar[j], g.nu);
    }
}

} // namespace covsafe
