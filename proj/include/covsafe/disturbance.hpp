#pragma once

#include <stdexcept>

#include "covsafe/vec2.hpp"

namespace covsafe {

enum class DisturbanceProfile {
    kPiecewise, // the five-branch ramp profile below
    kNone,
};

// Five-branch piecewise disturbance, identical in x and y:
//   (dmax/2) t          0    <= t < T/6
//   dmax t              T/6  <= t < T/3
//   (dmax/2)(T/2 - t)   T/3  <= t < 2T/3
//   -dmax               2T/3 <= t < 5T/6
//   (dmax/2)(t - T)     5T/6 <= t <= T
// The branch discontinuities are intentional and not smoothed.
inline Vec2 disturbance(double t, double T, double d_max,
                        DisturbanceProfile profile = DisturbanceProfile::kPiecewise) {
    if (t < 0.0 || t > T) {
        throw std::invalid_argument("disturbance: t outside [0, T]");
    }
    if (profile == DisturbanceProfile::kNone || d_max == 0.0) {
        return {};
    }
    double d = 0.0;
    if (t < T / 6.0) {
        d = 0.5 * d_max * t;
    } else if (t < T / 3.0) {
        d = d_max * t;
    } else if (t < 2.0 * T / 3.0) {
        d = 0.5 * d_max * (0.5 * T - t);
    } else if (t < 5.0 * T / 6.0) {
        d = -d_max;
    } else {
        d = 0.5 * d_max * (t - T);
    }
    return {d, d};
}

} // namespace covsafe
