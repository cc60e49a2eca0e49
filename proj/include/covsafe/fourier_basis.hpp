#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace covsafe {

// Truncated Fourier basis used to represent time-varying disturbances as a
// constant-weight expansion. N = 2L+1 entries, indexed j = 1..N:
//   psi_1 = 1, psi_2l = cos(w_l t), psi_2l+1 = sin(w_l t),  w_l = 2 pi l / T.
class FourierBasis {
public:
    FourierBasis(int harmonic_pairs, double period)
        : harmonic_pairs_(harmonic_pairs), period_(period) {
        if (harmonic_pairs < 1) {
            throw std::invalid_argument("FourierBasis: need at least one harmonic pair");
        }
        if (period <= 0.0) {
            throw std::invalid_argument("FourierBasis: period must be positive");
        }
    }

    int harmonic_pairs() const { return harmonic_pairs_; }
    double period() const { return period_; }
    int size() const { return 2 * harmonic_pairs_ + 1; }

    // Basis vector at time t; entry k of the result is psi_{k+1}(t).
    std::vector<double> eval(double t) const {
        std::vector<double> psi(static_cast<std::size_t>(size()));
        psi[0] = 1.0;
        for (int l = 1; l <= harmonic_pairs_; ++l) {
            const double w = 2.0 * std::numbers::pi * l / period_;
            psi[static_cast<std::size_t>(2 * l - 1)] = std::cos(w * t);
            psi[static_cast<std::size_t>(2 * l)] = std::sin(w * t);
        }
        return psi;
    }

private:
    int harmonic_pairs_;
    double period_;
};

} // namespace covsafe
