// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpf/scene/geometry.hpp"

namespace gpf {

struct PrimitiveRef {
    std::uint32_t shape = 0;
    std::uint32_t element = 0;  // triangle index for meshes, 0 otherwise
};

struct BvhHit {
    PrimitiveRef prim;
    PrimitiveHit hit;
};

std::vector<PrimitiveRef> enumerate_primitives(const std::vector<Shape>& shapes);
Bounds3 primitive_bounds(const std::vector<Shape>& shapes, const PrimitiveRef& prim);
std::optional<PrimitiveHit> intersect_primitive(const std::vector<Shape>& shapes, const PrimitiveRef& prim,
                                                const Ray& ray, double t_min, double t_max);

/// Binary BVH over shape primitives, split at the centroid median of the
/// longest axis. Holds no geometry: callers pass the shape list it was built on.
class Bvh {
public:
    explicit Bvh(const std::vector<Shape>& shapes);

    std::optional<BvhHit> intersect(const std::vector<Shape>& shapes, const Ray& ray, double t_min,
                                    double t_max) const;
    bool any_hit(const std::vector<Shape>& shapes, const Ray& ray, double t_min, double t_max) const;

    std::size_t primitive_count() const { return prims_.size(); }
    const std::vector<PrimitiveRef>& primitives() const { return prims_; }

private:
    struct Node {
        Bounds3 bounds;
        std::uint32_t first = 0;  // leaf: first primitive; interior: second child
        std::uint32_t count = 0;  // 0 for interior nodes
        std::uint8_t axis = 0;
    };

    std::uint32_t build(const std::vector<Shape>& shapes, std::vector<Bounds3>& bounds, std::uint32_t begin,
                        std::uint32_t end);

    std::vector<PrimitiveRef> prims_;
    std::vector<Node> nodes_;
};

}  // namespace gpf
