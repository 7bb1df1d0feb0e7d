// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpf/core/math.hpp"

namespace gpf {

struct Neighbor {
    std::uint32_t id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Orders neighbors by (distance, id); the id tiebreak makes query results unique.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

/// Optional traversal counters, for performance regression checks.
struct QueryStats {
    std::size_t nodes_visited = 0;
};

/// Static KD-tree over a snapshot of 3D points. Built by recursive median
/// split on the axis of largest extent; ids are positions in the input list.
///
/// Distances are Euclidean and the ball boundary is inclusive: a point is in
/// the ball of radius r iff |p - x|^2 <= r^2.
class PointIndex {
public:
    PointIndex() = default;
    explicit PointIndex(std::span<const Point3> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point3>& points() const { return points_; }

    /// All points within distance r of x, sorted by (distance, id).
    std::vector<Neighbor> ball_query(const Point3& x, double r, QueryStats* stats = nullptr) const;

    /// The min(k, n) nearest points, sorted by (distance, id).
    std::vector<Neighbor> knn_query(const Point3& x, std::size_t k, QueryStats* stats = nullptr) const;

    /// Ball query, topped up with the k_min nearest neighbors when fewer than
    /// k_min points fall inside r. Ball results come first, followed by the
    /// kNN ids not already present.
    std::vector<std::uint32_t> hybrid_query(const Point3& x, double r, std::size_t k_min,
                                            QueryStats* stats = nullptr) const;

private:
    struct Node {
        double split = 0.0;
        std::uint32_t begin = 0, end = 0;  // range in order_
        std::uint32_t left = 0, right = 0;  // child indices; 0 marks a leaf
        std::uint8_t axis = 0;
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end);

    std::vector<Point3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace gpf
