// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gpf/core/math.hpp"
#include "gpf/core/spectrum.hpp"
#include "gpf/integrators/photon.hpp"
#include "gpf/spatial/point_index.hpp"

namespace gpf {

inline constexpr double kMinScale = 1e-5;
inline constexpr double kMaxScale = 10.0;

/// One anisotropic Gaussian of the field. The precision matrix is
/// R diag(scale^-2) R^T with R the rotation of `rotation` (normalized on use).
struct GaussianPrimitive {
    Point3 mean;
    Quaternion rotation;  // unit up to storage precision
    Vec3 scale{0.01, 0.01, 0.01};
    RgbSpectrum flux;  // unconstrained; may go negative during training

    friend bool operator==(const GaussianPrimitive&, const GaussianPrimitive&) = default;
};

struct FieldParams {
    double radius = 0.02;   // ball-query radius, also where the distance falloff starts
    std::size_t k_min = 3;  // minimum neighborhood size guaranteed by the kNN top-up
    double epsilon = 1e-6;  // floor of the weight normalizer
};

/// Distance falloff: 1 inside r, exp(-3 t^2) outside with t = (dist - r) / max(r, 1e-6).
double distance_falloff(double dist, double r);

/// exp(-1/2 d^T Lambda d) * falloff(|d|), d = x - mean.
double gaussian_weight(const GaussianPrimitive& prim, const Point3& x, double r);

/// Forward state of one field query, kept for the backward pass.
struct FieldQuery {
    Point3 position;
    std::vector<std::uint32_t> ids;
    std::vector<double> weights;
    double weight_sum = 0.0;
    RgbSpectrum radiance;
    std::uint64_t version = 0;  // parameter version the query was evaluated against
};

/// dLoss/dparameters of one primitive for one query.
struct PrimitiveGradient {
    std::uint32_t id = 0;
    Vec3 mean;
    std::array<double, 4> rotation{};  // ambient gradient, (w, x, y, z)
    Vec3 log_scale;
    RgbSpectrum flux;
};

/// Gaussian photon field: the primitives, query parameters, and a KD-tree over
/// the means. The tree is rebuilt explicitly; query() refuses to run against a
/// tree older than the current parameters.
class GpfField {
public:
    GpfField() = default;
    GpfField(std::vector<GaussianPrimitive> primitives, FieldParams params);

    const std::vector<GaussianPrimitive>& primitives() const { return primitives_; }
    const FieldParams& params() const { return params_; }
    std::size_t size() const { return primitives_.size(); }

    void set_params(const FieldParams& params) { params_ = params; }
    /// Mutable access; bumps the parameter version, invalidating the index and
    /// every outstanding FieldQuery.
    std::vector<GaussianPrimitive>& mutable_primitives();

    std::uint64_t version() const { return version_; }
    bool index_fresh() const { return index_version_ == version_; }
    void rebuild_index();
    const PointIndex& index() const { return index_; }

    /// Hybrid neighborhood lookup and normalized weighted sum at x. An empty
    /// field returns zero radiance. Throws RuntimeError if the index is stale.
    FieldQuery query(const Point3& x) const;
    RgbSpectrum query_radiance(const Point3& x) const { return query(x).radiance; }

    /// Normalized weighted sum over an explicit neighbor set, with no index
    /// involved. Training uses this with neighborhoods from a snapshot index.
    FieldQuery evaluate(const Point3& x, std::vector<std::uint32_t> ids) const;

    /// Backpropagates dLoss/dL (per channel) through a query's weighted sum.
    /// The neighbor set is held fixed. Throws RuntimeError if the parameters
    /// changed since the query was evaluated.
    std::vector<PrimitiveGradient> query_gradients(const FieldQuery& q, const RgbSpectrum& d_radiance) const;

private:
    std::vector<GaussianPrimitive> primitives_;
    FieldParams params_;
    PointIndex index_;
    std::uint64_t version_ = 1;
    std::uint64_t index_version_ = 0;
};

/// One primitive per photon: mean and flux copied from the photon, isotropic
/// scale s0, rotation uniform over SO(3) from Rng(seed, Stream::FieldInit, {i}).
/// With max_primitives > 0 only the first max_primitives photons are used.
/// Throws RuntimeError for an empty photon list.
GpfField init_from_photons(std::span<const Photon> photons, double s0, std::uint64_t seed,
                           const FieldParams& params = {}, std::size_t max_primitives = 0);

}  // namespace gpf
