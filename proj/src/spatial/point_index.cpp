// SPDX-License-Identifier: Apache-2.0
#include "gpf/spatial/point_index.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace gpf {

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

PointIndex::PointIndex(std::span<const Point3> points) : points_(points.begin(), points.end()) {
    if (points_.empty()) return;
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t PointIndex::build(std::uint32_t begin, std::uint32_t end) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{0.0, begin, end, 0, 0, 0});
    if (end - begin <= kLeafSize) return index;

    Point3 lo{kInfinity, kInfinity, kInfinity}, hi{-kInfinity, -kInfinity, -kInfinity};
    for (std::uint32_t i = begin; i < end; ++i) {
        lo = min(lo, points_[order_[i]]);
        hi = max(hi, points_[order_[i]]);
    }
    const Vec3 extent = hi - lo;
    const int axis = (extent.x >= extent.y && extent.x >= extent.z) ? 0 : (extent.y >= extent.z ? 1 : 2);
    if (extent[axis] == 0.0) return index;  // all coincident

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    Node& node = nodes_[index];
    node.split = split;
    node.left = left;
    node.right = right;
    node.axis = static_cast<std::uint8_t>(axis);
    return index;
}

std::vector<Neighbor> PointIndex::ball_query(const Point3& x, double r, QueryStats* stats) const {
    std::vector<Neighbor> out;
    if (nodes_.empty() || !(r >= 0.0)) return out;

    std::vector<std::uint32_t> stack{0};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        ++visited;
        if (node.left == 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t id = order_[i];
                const double d = distance(points_[id], x);
                if (d <= r) out.push_back({id, d});
            }
            continue;
        }
        // Every point on the far side is at least |diff| away along the axis.
        const double diff = x[node.axis] - node.split;
        const double plane = std::sqrt(diff * diff);
        if (diff <= 0.0) {
            if (plane <= r) stack.push_back(node.right);
            stack.push_back(node.left);
        } else {
            if (plane <= r) stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    std::sort(out.begin(), out.end(), neighbor_less);
    if (stats) stats->nodes_visited += visited;
    return out;
}

std::vector<Neighbor> PointIndex::knn_query(const Point3& x, std::size_t k, QueryStats* stats) const {
    std::vector<Neighbor> heap;  // max-heap under neighbor_less
    if (nodes_.empty() || k == 0) return heap;
    k = std::min(k, points_.size());
    heap.reserve(k + 1);

    auto worst = [&]() { return heap.size() < k ? kInfinity : heap.front().distance; };

    struct Pending {
        std::uint32_t node;
        double plane;  // lower bound on distance to anything inside
    };
    std::vector<Pending> stack{{0, 0.0}};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        if (p.plane > worst()) continue;
        const Node& node = nodes_[p.node];
        ++visited;
        if (node.left == 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const Neighbor cand{order_[i], distance(points_[order_[i]], x)};
                if (heap.size() < k) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end(), neighbor_less);
                } else if (neighbor_less(cand, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), neighbor_less);
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end(), neighbor_less);
                }
            }
            continue;
        }
        const double diff = x[node.axis] - node.split;
        const double plane = std::max(p.plane, std::sqrt(diff * diff));
        const std::uint32_t near = diff <= 0.0 ? node.left : node.right;
        const std::uint32_t far = diff <= 0.0 ? node.right : node.left;
        stack.push_back({far, plane});
        stack.push_back({near, p.plane});
    }
    std::sort_heap(heap.begin(), heap.end(), neighbor_less);
    if (stats) stats->nodes_visited += visited;
    return heap;
}

std::vector<std::uint32_t> PointIndex::hybrid_query(const Point3& x, double r, std::size_t k_min,
                                                    QueryStats* stats) const {
    const std::vector<Neighbor> ball = ball_query(x, r, stats);
    std::vector<std::uint32_t> ids;
    ids.reserve(std::max(ball.size(), k_min));
    for (const Neighbor& n : ball) ids.push_back(n.id);
    if (ball.size() >= k_min) return ids;

    for (const Neighbor& n : knn_query(x, k_min, stats)) {
        if (std::find(ids.begin(), ids.end(), n.id) == ids.end()) ids.push_back(n.id);
    }
    return ids;
}

}  // namespace gpf
