// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gpf/core/math.hpp"
#include "gpf/core/spectrum.hpp"

namespace gpf {

/// Self-intersection epsilon: hits closer than this along a ray are ignored.
inline constexpr double kRayEpsilon = 1e-4;

struct Ray {
    Point3 origin;
    Vec3 direction;  // unit length

    Point3 at(double t) const { return origin + t * direction; }
};

struct Sphere {
    Point3 center;
    double radius = 1.0;
};

/// Parallelogram corner + a*edge_u + b*edge_v, a, b in [0, 1]. The geometric
/// normal is normalize(edge_u x edge_v).
struct Quad {
    Point3 corner;
    Vec3 edge_u;
    Vec3 edge_v;
};

/// Triangles wound counter-clockwise around their geometric normal.
struct TriangleMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::uint32_t, 3>> indices;
};

struct Shape {
    std::variant<Sphere, Quad, TriangleMesh> geometry;
    std::size_t material = 0;
    /// Radiance leaving the geometric-normal side; makes the shape an area emitter.
    std::optional<RgbSpectrum> emission;

    double area() const;
    bool is_emitter() const { return emission.has_value(); }
};

struct Bounds3 {
    Point3 lo{kInfinity, kInfinity, kInfinity};
    Point3 hi{-kInfinity, -kInfinity, -kInfinity};

    void extend(const Point3& p) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    void extend(const Bounds3& b) {
        lo = min(lo, b.lo);
        hi = max(hi, b.hi);
    }
    Point3 centroid() const { return 0.5 * (lo + hi); }
    int longest_axis() const;
    /// Slab test against [t_min, t_max].
    bool intersect(const Ray& ray, const Vec3& inv_dir, double t_min, double t_max) const;
};

/// Geometric hit record for a single primitive.
struct PrimitiveHit {
    double t = kInfinity;
    Vec3 geometric_normal;  // unit, per the shape's orientation convention
};

std::optional<PrimitiveHit> intersect_sphere(const Sphere& s, const Ray& ray, double t_min, double t_max);
std::optional<PrimitiveHit> intersect_quad(const Quad& q, const Ray& ray, double t_min, double t_max);
std::optional<PrimitiveHit> intersect_triangle(const Point3& p0, const Point3& p1, const Point3& p2, const Ray& ray,
                                               double t_min, double t_max);

}  // namespace gpf
