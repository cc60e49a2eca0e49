#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "covsafe/adaptation.hpp"
#include "covsafe/vec2.hpp"

namespace covsafe {

// Pairwise barrier against the nearest neighbor:
//   h = ||p - z||^2 - (2 r_safe)^2,  dh/dp = 2(p - z) = -dh/dz.
// zeta bounds the terms the filter cannot measure: the approximation residual
// (|eps| <= E) and the neighbor speed (||z dot|| <= V_z).
struct BarrierEvaluation {
    double h = 0.0;
    Vec2 grad_p;
    Vec2 grad_z;
    int neighbor_id = -1;
    double zeta = 0.0;
    bool degenerate = false; // p == z: gradient vanished, a collision event
};

inline BarrierEvaluation barrier(const Vec2& p, const Vec2& z, double r_safe, double E, double V_z,
                                 int neighbor_id = -1) {
    if (r_safe <= 0.0) {
        throw std::invalid_argument("barrier: r_safe must be positive");
    }
    BarrierEvaluation be;
    const Vec2 diff = p - z;
    be.h = dot(diff, diff) - 4.0 * r_safe * r_safe;
    be.grad_p = 2.0 * diff;
    be.grad_z = -2.0 * diff;
    be.neighbor_id = neighbor_id;
    const double g = norm(be.grad_p);
    be.zeta = g * E + g * V_z;
    be.degenerate = (g == 0.0);
    return be;
}

// Half-plane constraint on the input, feasible form dot(a, u) + b >= 0.
struct LinearConstraint {
    Vec2 a;
    double b = 0.0;
};

// Uncertainty-robust barrier condition with the current estimates:
//   a = (theta_hat + (1+alpha)/2) dh/dp
//   b = (dh/dp)' sum_j d_hat_j psi_j - zeta
//       + (mu/2) (h - K theta_bar^2 - sum_j Qj d_bar_j^2).
inline LinearConstraint assemble_constraint(const BarrierEvaluation& be, const AdaptiveState& est,
                                            const AdaptationGains& g,
                                            const std::vector<double>& psi, double alpha) {
    if (psi.size() != est.d_hat.size() || psi.size() != g.Q.size()) {
        throw std::invalid_argument("assemble_constraint: basis/estimate size mismatch");
    }
    LinearConstraint c;
    c.a = (est.theta_hat + 0.5 * (1.0 + alpha)) * be.grad_p;

    Vec2 d_sum;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        d_sum += psi[j] * est.d_hat[j];
    }
    double certificate_margin = g.K * g.theta_bar * g.theta_bar;
    for (std::size_t j = 0; j < g.Q.size(); ++j) {
        certificate_margin += g.Q[j] * g.d_bar[j] * g.d_bar[j];
    }
    c.b = dot(be.grad_p, d_sum) - be.zeta + 0.5 * g.mu * (be.h - certificate_margin);
    return c;
}

// Closed-form CBF-QP: minimizer of ||u - u_nom||^2 subject to dot(a,u)+b >= 0
// is u_nom itself when feasible, otherwise its projection onto the boundary.
inline Vec2 solve_cbf_qp(const Vec2& u_nom, const LinearConstraint& c) {
    const double slack = dot(c.a, u_nom) + c.b;
    if (slack >= 0.0) return u_nom;
    const double aa = dot(c.a, c.a);
    if (aa == 0.0) {
        throw std::runtime_error("solve_cbf_qp: infeasible constraint (zero gradient, b < 0)");
    }
    return u_nom - (slack / aa) * c.a;
}

// Safety certificate of the theorem: barrier value discounted by the weighted
// squared estimation errors. Needs the simulation-side true values, so it is
// a diagnostic, not part of the controller.
inline double hbar_diagnostic(double h, double theta_err, const std::vector<Vec2>& d_err,
                              const AdaptationGains& g) {
    if (d_err.size() != g.Q.size()) {
        throw std::invalid_argument("hbar_diagnostic: d_err size mismatch");
    }
    double hbar = h - g.K * theta_err * theta_err;
    for (std::size_t j = 0; j < d_err.size(); ++j) {
        hbar -= g.Q[j] * dot(d_err[j], d_err[j]);
    }
    return hbar;
}

} // namespace covsafe
