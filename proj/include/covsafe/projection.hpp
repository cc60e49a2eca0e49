#pragma once

#include <cmath>

#include "covsafe/vec2.hpp"

namespace covsafe {

// Convex bounding function for the projection operator:
//   l(x) = (x'x - xbar^2) / (2 eta xbar + eta^2)
// l <= 0 iff ||x|| <= xbar, l = 1 iff ||x|| = xbar + eta.
inline double convex_bound(double x, double x_bar, double eta) {
    return (x * x - x_bar * x_bar) / (2.0 * eta * x_bar + eta * eta);
}

inline double convex_bound(const Vec2& x, double x_bar, double eta) {
    return (dot(x, x) - x_bar * x_bar) / (2.0 * eta * x_bar + eta * eta);
}

// Projection operator Proj(x, y, l): passes y through unless l(x) > 0 and y
// points outward (y' grad l > 0), in which case the radial component of y is
// scaled back by l(x). grad l is parallel to x, so the rank-one term reduces
// to x (x'y) / ||x||^2.
inline double proj(double x, double y, double x_bar, double eta) {
    const double l = convex_bound(x, x_bar, eta);
    if (l > 0.0 && y * x > 0.0) {
        return y - l * y;
    }
    return y;
}

inline Vec2 proj(const Vec2& x, const Vec2& y, double x_bar, double eta) {
    const double l = convex_bound(x, x_bar, eta);
    if (l > 0.0 && dot(y, x) > 0.0) {
        return y - (l * dot(x, y) / dot(x, x)) * x;
    }
    return y;
}

// Radial rescale onto the l <= 1 ball (||x|| <= xbar + eta). The continuous
// projection keeps estimates inside; an explicit integration step can
// overshoot, so the simulation re-projects after every step.
inline double clamp_to_bound(double x, double x_bar, double eta) {
    const double limit = x_bar + eta;
    if (std::abs(x) > limit) return x > 0.0 ? limit : -limit;
    return x;
}

inline Vec2 clamp_to_bound(const Vec2& x, double x_bar, double eta) {
    const double limit = x_bar + eta;
    const double n = norm(x);
    if (n > limit) return (limit / n) * x;
    return x;
}

} // namespace covsafe
