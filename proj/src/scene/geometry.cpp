// SPDX-License-Identifier: Apache-2.0
#include "gpf/scene/geometry.hpp"

namespace gpf {

double Shape::area() const {
    struct AreaVisitor {
        double operator()(const Sphere& s) const { return 4.0 * kPi * s.radius * s.radius; }
        double operator()(const Quad& q) const { return length(cross(q.edge_u, q.edge_v)); }
        double operator()(const TriangleMesh& m) const {
            double a = 0.0;
            for (const auto& tri : m.indices) {
                const Point3& p0 = m.vertices[tri[0]];
                a += 0.5 * length(cross(m.vertices[tri[1]] - p0, m.vertices[tri[2]] - p0));
            }
            return a;
        }
    };
    return std::visit(AreaVisitor{}, geometry);
}

int Bounds3::longest_axis() const {
    const Vec3 d = hi - lo;
    if (d.x >= d.y && d.x >= d.z) return 0;
    return d.y >= d.z ? 1 : 2;
}

bool Bounds3::intersect(const Ray& ray, const Vec3& inv_dir, double t_min, double t_max) const {
    for (int a = 0; a < 3; ++a) {
        double t0 = (lo[a] - ray.origin[a]) * inv_dir[a];
        double t1 = (hi[a] - ray.origin[a]) * inv_dir[a];
        if (t0 > t1) std::swap(t0, t1);
        // NaN from 0*inf keeps the previous interval.
        if (t0 > t_min) t_min = t0;
        if (t1 < t_max) t_max = t1;
        if (t_min > t_max) return false;
    }
    return true;
}

std::optional<PrimitiveHit> intersect_sphere(const Sphere& s, const Ray& ray, double t_min, double t_max) {
    const Vec3 oc = ray.origin - s.center;
    const double half_b = dot(oc, ray.direction);
    const double c = dot(oc, oc) - s.radius * s.radius;
    const double disc = half_b * half_b - c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double q = half_b > 0.0 ? -half_b - sq : -half_b + sq;
    double t0 = q;
    double t1 = q != 0.0 ? c / q : 0.0;
    if (t0 > t1) std::swap(t0, t1);
    double t = t0;
    if (!(t > t_min && t < t_max)) {
        t = t1;
        if (!(t > t_min && t < t_max)) return std::nullopt;
    }
    return PrimitiveHit{t, (ray.at(t) - s.center) / s.radius};
}

std::optional<PrimitiveHit> intersect_quad(const Quad& q, const Ray& ray, double t_min, double t_max) {
    const Vec3 n = cross(q.edge_u, q.edge_v);
    const double denom = dot(n, ray.direction);
    const double n2 = dot(n, n);
    if (std::abs(denom) < 1e-12 * std::sqrt(n2)) return std::nullopt;
    const double t = dot(n, q.corner - ray.origin) / denom;
    if (!(t > t_min && t < t_max)) return std::nullopt;
    const Vec3 w = ray.at(t) - q.corner;
    const double a = dot(n, cross(w, q.edge_v)) / n2;
    const double b = dot(n, cross(q.edge_u, w)) / n2;
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0) return std::nullopt;
    return PrimitiveHit{t, n / std::sqrt(n2)};
}

std::optional<PrimitiveHit> intersect_triangle(const Point3& p0, const Point3& p1, const Point3& p2, const Ray& ray,
                                               double t_min, double t_max) {
    // Moller-Trumbore.
    const Vec3 e1 = p1 - p0;
    const Vec3 e2 = p2 - p0;
    const Vec3 pvec = cross(ray.direction, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = ray.origin - p0;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(ray.direction, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = dot(e2, qvec) * inv_det;
    if (!(t > t_min && t < t_max)) return std::nullopt;
    return PrimitiveHit{t, normalize(cross(e1, e2))};
}

}  // namespace gpf
