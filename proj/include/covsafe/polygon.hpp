#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "covsafe/vec2.hpp"

namespace covsafe {

// Convex polygons are plain CCW vertex lists. An empty list is the empty polygon.
using Polygon = std::vector<Vec2>;

// Vertices closer than this are merged when clipping, so quadrature never
// sees sliver edges.
inline constexpr double kVertexMergeTol = 1e-12;

inline double polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        twice += cross(poly[j], poly[i]);
    }
    return 0.5 * twice;
}

// Arithmetic mean of the vertices. Used as the fan apex for quadrature; it is
// interior for any convex polygon.
inline Vec2 vertex_average(const Polygon& poly) {
    Vec2 sum;
    for (const Vec2& v : poly) sum += v;
    return sum / static_cast<double>(poly.size());
}

inline bool point_in_convex(const Polygon& poly, const Vec2& q, double tol = 1e-12) {
    if (poly.size() < 3) return false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if (cross(poly[i] - poly[j], q - poly[j]) < -tol) return false;
    }
    return true;
}

// Keeps the part of `poly` with dot(normal, q) <= offset. The input must be a
// convex CCW polygon with at least 3 vertices; the result may be empty.
inline Polygon clip_halfplane(const Polygon& poly, const Vec2& normal, double offset) {
    if (poly.size() < 3) {
        throw std::invalid_argument("clip_halfplane: polygon must have at least 3 vertices");
    }
    if (normal.x == 0.0 && normal.y == 0.0) {
        throw std::invalid_argument("clip_halfplane: zero normal");
    }

    Polygon out;
    out.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[j];
        const Vec2& b = poly[i];
        const double da = dot(normal, a) - offset;
        const double db = dot(normal, b) - offset;
        if (da <= 0.0) {
            out.push_back(a);
            if (db > 0.0) {
                out.push_back(a + (da / (da - db)) * (b - a));
            }
        } else if (db <= 0.0) {
            out.push_back(a + (da / (da - db)) * (b - a));
        }
    }

    // Merge duplicates introduced by intersections landing on vertices.
    Polygon merged;
    merged.reserve(out.size());
    for (const Vec2& v : out) {
        if (merged.empty() || distance(merged.back(), v) > kVertexMergeTol) {
            merged.push_back(v);
        }
    }
    while (merged.size() > 1 && distance(merged.front(), merged.back()) <= kVertexMergeTol) {
        merged.pop_back();
    }
    if (merged.size() < 3) merged.clear();
    return merged;
}

// Validates the coverage domain: >= 3 vertices, strictly convex, CCW
// (signed area > 0), no repeated vertices.
inline void validate_domain(const Polygon& domain) {
    if (domain.size() < 3) {
        throw std::invalid_argument("domain: needs at least 3 vertices");
    }
    const std::size_t n = domain.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(domain[i], domain[j]) <= kVertexMergeTol) {
                throw std::invalid_argument("domain: repeated vertex at index " + std::to_string(j));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = domain[i];
        const Vec2& b = domain[(i + 1) % n];
        const Vec2& c = domain[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) {
            throw std::invalid_argument(
                "domain: not strictly convex CCW at vertex index " + std::to_string((i + 1) % n));
        }
    }
    if (polygon_area(domain) <= 0.0) {
        throw std::invalid_argument("domain: signed area must be positive");
    }
}

} // namespace covsafe
