#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "covsafe/polygon.hpp"
#include "covsafe/vec2.hpp"

namespace covsafe {

inline constexpr double kGeneratorDistinctTol = 1e-9;

namespace detail {

// Core tessellation: clips the domain per generator against every
// perpendicular-bisector half-plane. Point q belongs to cell i when
// ||q - p_i|| <= ||q - p_j||, i.e. dot(p_j - p_i, q) <= dot(p_j - p_i, mid).
inline std::vector<Polygon> bisector_cells(const Polygon& domain,
                                           const std::vector<Vec2>& positions) {
    std::vector<Polygon> cells;
    cells.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        Polygon cell = domain;
        for (std::size_t j = 0; j < positions.size() && !cell.empty(); ++j) {
            if (j == i) continue;
            const Vec2 normal = positions[j] - positions[i];
            const double offset = dot(normal, 0.5 * (positions[i] + positions[j]));
            cell = clip_halfplane(cell, normal, offset);
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace detail

// Voronoi tessellation of the domain. Generators must lie inside the domain
// and be pairwise distinct; the n cells tile the domain.
inline std::vector<Polygon> voronoi_cells(const Polygon& domain,
                                          const std::vector<Vec2>& positions) {
    validate_domain(domain);
    if (positions.empty()) {
        throw std::invalid_argument("voronoi_cells: no generators");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!point_in_convex(domain, positions[i])) {
            throw std::invalid_argument("voronoi_cells: generator " + std::to_string(i) +
                                        " lies outside the domain");
        }
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if (distance(positions[i], positions[j]) <= kGeneratorDistinctTol) {
                throw std::invalid_argument("voronoi_cells: generators " + std::to_string(i) +
                                            " and " + std::to_string(j) + " coincide");
            }
        }
    }
    return detail::bisector_cells(domain, positions);
}

// Tessellation used by the simulation loop: generators may sit outside the
// domain (disturbances can push agents past the boundary), in which case
// their cells may come out empty. Cells still tile the domain. Coincident
// generators remain a hard error since the bisector is undefined.
inline std::vector<Polygon> voronoi_partition(const Polygon& domain,
                                              const std::vector<Vec2>& positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if (distance(positions[i], positions[j]) <= kVertexMergeTol) {
                throw std::runtime_error("voronoi_partition: generators " + std::to_string(i) +
                                         " and " + std::to_string(j) + " coincide");
            }
        }
    }
    return detail::bisector_cells(domain, positions);
}

} // namespace covsafe
