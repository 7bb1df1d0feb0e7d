// SPDX-License-Identifier: Apache-2.0
#include "bvh.hpp"

#include <algorithm>
#include <numeric>

namespace gpf {

namespace {
constexpr std::uint32_t kLeafSize = 4;
}

std::vector<PrimitiveRef> enumerate_primitives(const std::vector<Shape>& shapes) {
    std::vector<PrimitiveRef> prims;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        if (const auto* mesh = std::get_if<TriangleMesh>(&shapes[s].geometry)) {
            for (std::size_t t = 0; t < mesh->indices.size(); ++t) {
                prims.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)});
            }
        } else {
            prims.push_back({static_cast<std::uint32_t>(s), 0});
        }
    }
    return prims;
}

Bounds3 primitive_bounds(const std::vector<Shape>& shapes, const PrimitiveRef& prim) {
    Bounds3 b;
    const Shape& shape = shapes[prim.shape];
    if (const auto* s = std::get_if<Sphere>(&shape.geometry)) {
        const Vec3 r{s->radius, s->radius, s->radius};
        b.extend(s->center - r);
        b.extend(s->center + r);
    } else if (const auto* q = std::get_if<Quad>(&shape.geometry)) {
        b.extend(q->corner);
        b.extend(q->corner + q->edge_u);
        b.extend(q->corner + q->edge_v);
        b.extend(q->corner + q->edge_u + q->edge_v);
    } else {
        const auto& mesh = std::get<TriangleMesh>(shape.geometry);
        for (std::uint32_t v : mesh.indices[prim.element]) b.extend(mesh.vertices[v]);
    }
    return b;
}

std::optional<PrimitiveHit> intersect_primitive(const std::vector<Shape>& shapes, const PrimitiveRef& prim,
                                                const Ray& ray, double t_min, double t_max) {
    const Shape& shape = shapes[prim.shape];
    if (const auto* s = std::get_if<Sphere>(&shape.geometry)) return intersect_sphere(*s, ray, t_min, t_max);
    if (const auto* q = std::get_if<Quad>(&shape.geometry)) return intersect_quad(*q, ray, t_min, t_max);
    const auto& mesh = std::get<TriangleMesh>(shape.geometry);
    const auto& tri = mesh.indices[prim.element];
    return intersect_triangle(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]], ray, t_min, t_max);
}

Bvh::Bvh(const std::vector<Shape>& shapes) : prims_(enumerate_primitives(shapes)) {
    if (prims_.empty()) return;
    std::vector<Bounds3> bounds(prims_.size());
    for (std::size_t i = 0; i < prims_.size(); ++i) bounds[i] = primitive_bounds(shapes, prims_[i]);
    nodes_.reserve(2 * prims_.size());
    build(shapes, bounds, 0, static_cast<std::uint32_t>(prims_.size()));
}

std::uint32_t Bvh::build(const std::vector<Shape>& shapes, std::vector<Bounds3>& bounds, std::uint32_t begin,
                         std::uint32_t end) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Bounds3 node_bounds, centroid_bounds;
    for (std::uint32_t i = begin; i < end; ++i) {
        node_bounds.extend(bounds[i]);
        centroid_bounds.extend(bounds[i].centroid());
    }
    nodes_[index].bounds = node_bounds;

    const int axis = centroid_bounds.longest_axis();
    if (end - begin <= kLeafSize || centroid_bounds.hi[axis] == centroid_bounds.lo[axis]) {
        nodes_[index].first = begin;
        nodes_[index].count = end - begin;
        return index;
    }

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::vector<std::uint32_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = bounds[a].centroid()[axis];
                         const double cb = bounds[b].centroid()[axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    std::vector<PrimitiveRef> p(order.size());
    std::vector<Bounds3> bb(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        p[i] = prims_[order[i]];
        bb[i] = bounds[order[i]];
    }
    std::copy(p.begin(), p.end(), prims_.begin() + begin);
    std::copy(bb.begin(), bb.end(), bounds.begin() + begin);

    build(shapes, bounds, begin, mid);
    const std::uint32_t second = build(shapes, bounds, mid, end);
    nodes_[index].first = second;
    nodes_[index].count = 0;
    nodes_[index].axis = static_cast<std::uint8_t>(axis);
    return index;
}

std::optional<BvhHit> Bvh::intersect(const std::vector<Shape>& shapes, const Ray& ray, double t_min,
                                     double t_max) const {
    if (nodes_.empty()) return std::nullopt;
    const Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    const bool dir_neg[3] = {inv_dir.x < 0.0, inv_dir.y < 0.0, inv_dir.z < 0.0};

    std::optional<BvhHit> best;
    std::uint32_t stack[64];
    int top = 0;
    std::uint32_t current = 0;
    while (true) {
        const Node& node = nodes_[current];
        if (node.bounds.intersect(ray, inv_dir, t_min, t_max)) {
            if (node.count > 0) {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                    if (auto hit = intersect_primitive(shapes, prims_[i], ray, t_min, t_max)) {
                        t_max = hit->t;
                        best = BvhHit{prims_[i], *hit};
                    }
                }
                if (top == 0) break;
                current = stack[--top];
            } else if (dir_neg[node.axis]) {
                stack[top++] = current + 1;
                current = node.first;
            } else {
                stack[top++] = node.first;
                current = current + 1;
            }
        } else {
            if (top == 0) break;
            current = stack[--top];
        }
    }
    return best;
}

bool Bvh::any_hit(const std::vector<Shape>& shapes, const Ray& ray, double t_min, double t_max) const {
    if (nodes_.empty()) return false;
    const Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    std::uint32_t stack[64];
    int top = 0;
    std::uint32_t current = 0;
    while (true) {
        const Node& node = nodes_[current];
        if (node.bounds.intersect(ray, inv_dir, t_min, t_max)) {
            if (node.count > 0) {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                    if (intersect_primitive(shapes, prims_[i], ray, t_min, t_max)) return true;
                }
                if (top == 0) break;
                current = stack[--top];
            } else {
                stack[top++] = node.first;
                current = current + 1;
            }
        } else {
            if (top == 0) break;
            current = stack[--top];
        }
    }
    return false;
}

}  // namespace gpf
