#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "covsafe/polygon.hpp"
#include "covsafe/vec2.hpp"

namespace covsafe {

// Bivariate normal importance density with independent axes:
//   phi(q) = exp(-((x-mx)^2/sx^2 + (y-my)^2/sy^2)/2) / (2 pi sx sy)
// Strictly positive and bounded everywhere.
struct GaussianDensity {
    Vec2 mean;
    Vec2 sigma;

    GaussianDensity(Vec2 mean_, Vec2 sigma_) : mean(mean_), sigma(sigma_) {
        if (sigma.x <= 0.0 || sigma.y <= 0.0) {
            throw std::invalid_argument("GaussianDensity: sigma must be positive");
        }
    }

    double operator()(const Vec2& q) const {
        const double ex = (q.x - mean.x) / sigma.x;
        const double ey = (q.y - mean.y) / sigma.y;
        return std::exp(-0.5 * (ex * ex + ey * ey)) /
               (2.0 * std::numbers::pi * sigma.x * sigma.y);
    }
};

struct UniformDensity {
    double value = 1.0;
    double operator()(const Vec2&) const { return value; }
};

template <class F>
concept DensityFn = requires(const F& f, Vec2 q) {
    { f(q) } -> std::convertible_to<double>;
};

// Per-cell summary: clipped polygon, density mass and density-weighted centroid.
struct CellSummary {
    Polygon polygon;
    double mass = 0.0;
    Vec2 centroid;
};

namespace detail {

// Degree-4 symmetric 6-point triangle rule (weights sum to 1, applied times
// the triangle area).
struct TriQuadPoint {
    double b0, b1, b2; // barycentric
    double w;
};

inline constexpr TriQuadPoint kTriRuleDeg4[6] = {
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
};

// Accumulated density moments over a region: mass, first moment, and the
// second moment about `about` (for the locational cost integrand).
struct CellMoments {
    double mass = 0.0;
    Vec2 first;
    double second_about = 0.0;
};

template <DensityFn F>
inline void accumulate_triangle(const Vec2& a, const Vec2& b, const Vec2& c, const F& density,
                                const Vec2& about, int depth, CellMoments& acc) {
    if (depth > 0) {
        const Vec2 ab = 0.5 * (a + b);
        const Vec2 bc = 0.5 * (b + c);
        const Vec2 ca = 0.5 * (c + a);
        accumulate_triangle(a, ab, ca, density, about, depth - 1, acc);
        accumulate_triangle(ab, b, bc, density, about, depth - 1, acc);
        accumulate_triangle(ca, bc, c, density, about, depth - 1, acc);
        accumulate_triangle(ab, bc, ca, density, about, depth - 1, acc);
        return;
    }
    const double area = 0.5 * cross(b - a, c - a);
    for (const TriQuadPoint& pt : kTriRuleDeg4) {
        const Vec2 q = pt.b0 * a + pt.b1 * b + pt.b2 * c;
        const double w = area * pt.w * density(q);
        acc.mass += w;
        acc.first += w * q;
        acc.second_about += w * norm_sq(q - about);
    }
}

// Fan-triangulates the convex cell from its vertex average and applies the
// refined triangle rule on every fan triangle.
template <DensityFn F>
inline CellMoments cell_moments(const Polygon& cell, const F& density, const Vec2& about,
                                int depth) {
    CellMoments acc;
    const Vec2 apex = vertex_average(cell);
    for (std::size_t i = 0, j = cell.size() - 1; i < cell.size(); j = i++) {
        accumulate_triangle(apex, cell[j], cell[i], density, about, depth, acc);
    }
    return acc;
}

} // namespace detail

inline constexpr int kDefaultQuadDepth = 3;

// Density mass and centroid of a convex cell,
//   m = integral of phi over the cell,  c = integral of phi q / m.
// `resolution` counts uniform refinement levels of the fan triangles.
template <DensityFn F>
inline std::pair<double, Vec2> cell_mass_centroid(const Polygon& cell, const F& density,
                                                  int resolution = kDefaultQuadDepth) {
    if (cell.size() < 3 || polygon_area(cell) <= 0.0) {
        throw std::invalid_argument("cell_mass_centroid: empty or degenerate cell");
    }
    const detail::CellMoments m = detail::cell_moments(cell, density, Vec2{}, resolution);
    return {m.mass, m.first / m.mass};
}

// Coverage cost of one cell: integral of ||q - p||^2 phi(q) over the cell.
template <DensityFn F>
inline double cell_coverage_cost(const Polygon& cell, const Vec2& p, const F& density,
                                 int resolution = kDefaultQuadDepth) {
    if (cell.size() < 3) return 0.0;
    return detail::cell_moments(cell, density, p, resolution).second_about;
}

// Locational cost H = sum_i over cells of integral ||q - p_i||^2 phi.
// Empty cells contribute zero.
template <DensityFn F>
inline double locational_cost(const std::vector<Polygon>& cells, const std::vector<Vec2>& positions,
                              const F& density, int resolution = kDefaultQuadDepth) {
    if (cells.size() != positions.size()) {
        throw std::invalid_argument("locational_cost: cells/positions size mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        total += cell_coverage_cost(cells[i], positions[i], density, resolution);
    }
    return total;
}

} // namespace covsafe
