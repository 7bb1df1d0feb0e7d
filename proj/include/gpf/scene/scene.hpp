// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpf/core/rng.hpp"
#include "gpf/scene/camera.hpp"
#include "gpf/scene/geometry.hpp"
#include "gpf/scene/material.hpp"

namespace gpf {

struct SurfaceInteraction {
    Point3 position;
    UnitVec3 normal;            // shading normal, flipped into the hemisphere of wo
    UnitVec3 geometric_normal;  // orientation as defined by the shape
    UnitVec3 wo;                // toward the origin of the arriving ray
    std::size_t shape = 0;
    std::size_t material = 0;
    RgbSpectrum emission;  // radiance toward wo; zero off the emitting side
    double t = 0.0;
    bool front_face = true;  // wo on the geometric-normal side
};

struct NamedMaterial {
    std::string name;
    Material material;
};

/// Point sampled on an emitter's surface.
struct EmitterPoint {
    Point3 position;
    UnitVec3 normal;  // emitting side
    RgbSpectrum radiance;
    double pdf_area = 0.0;  // includes the emitter selection probability
    std::size_t shape = 0;
};

/// Photon leaving a light: flux is per photon for a batch of `photon_count`.
struct PhotonEmission {
    Ray ray;
    RgbSpectrum flux;
};

class Bvh;

/// Immutable scene: camera, named materials, shapes and the acceleration
/// structure. Construction validates every invariant and throws
/// ValidationError with a field path on failure.
class Scene {
public:
    Scene(Camera camera, std::vector<NamedMaterial> materials, std::vector<Shape> shapes);
    ~Scene();
    Scene(const Scene&);
    Scene& operator=(const Scene&);
    Scene(Scene&&) noexcept;
    Scene& operator=(Scene&&) noexcept;

    const Camera& camera() const { return camera_; }
    const std::vector<NamedMaterial>& materials() const { return materials_; }
    const std::vector<Shape>& shapes() const { return shapes_; }
    const Material& material(std::size_t id) const { return materials_[id].material; }
    const Material& material_of(const SurfaceInteraction& it) const { return materials_[it.material].material; }

    /// Nearest hit with t in (kRayEpsilon, t_max).
    std::optional<SurfaceInteraction> intersect(const Ray& ray, double t_max = kInfinity) const;
    /// Same contract as intersect, scanning every primitive.
    std::optional<SurfaceInteraction> intersect_brute_force(const Ray& ray, double t_max = kInfinity) const;
    /// True if anything blocks the open segment between two points.
    bool occluded(const Point3& from, const Point3& to) const;

    std::size_t primitive_count() const;

    // Emitters.
    bool has_emitters() const { return !emitters_.empty(); }
    const std::vector<std::size_t>& emitter_shapes() const { return emitters_; }
    /// pi * A * L for one emissive shape.
    RgbSpectrum emitter_power(std::size_t shape) const;
    RgbSpectrum total_power() const;
    /// Probability of choosing emissive shape `shape` (proportional to mean power).
    double emitter_selection_probability(std::size_t shape) const;

    /// Picks an emitter by power and a point uniformly on its area.
    EmitterPoint sample_emitter_point(double u_select, double u1, double u2) const;
    /// Area density sample_emitter_point assigns to `position` on `shape`.
    double emitter_pdf_area(std::size_t shape) const;

    /// Starts a photon path. Throws RuntimeError when the scene has no emitters.
    PhotonEmission sample_light_emission(Rng& rng, std::uint64_t photon_count) const;

    /// Bounding box of all geometry.
    Bounds3 bounds() const;

private:
    std::optional<SurfaceInteraction> make_interaction(const Ray& ray, std::size_t shape, const PrimitiveHit& hit) const;
    void validate() const;

    Camera camera_;
    std::vector<NamedMaterial> materials_;
    std::vector<Shape> shapes_;
    std::vector<std::size_t> emitters_;
    std::vector<double> emitter_cdf_;
    std::unique_ptr<Bvh> bvh_;
};

}  // namespace gpf
