// SPDX-License-Identifier: Apache-2.0
#include "gpf/scene/scene.hpp"

#include <algorithm>
#include <set>

#include "bvh.hpp"
#include "gpf/core/error.hpp"
#include "gpf/core/sampling.hpp"

namespace gpf {

namespace {

std::string shape_path(std::size_t i) { return "shapes[" + std::to_string(i) + "]"; }

void check_spectrum(const RgbSpectrum& s, double hi, const std::string& path) {
    if (!s.is_finite() || !s.is_non_negative() || s.max_component() > hi) {
        throw ValidationError(path + ": channels must be finite and within [0, " +
                              (hi == kInfinity ? std::string("inf") : std::to_string(hi)) + "]");
    }
}

}  // namespace

Scene::Scene(Camera camera, std::vector<NamedMaterial> materials, std::vector<Shape> shapes)
    : camera_(std::move(camera)), materials_(std::move(materials)), shapes_(std::move(shapes)) {
    validate();
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
        if (shapes_[i].is_emitter() && !shapes_[i].emission->is_black()) emitters_.push_back(i);
    }
    double acc = 0.0;
    for (std::size_t s : emitters_) {
        acc += emitter_power(s).average();
        emitter_cdf_.push_back(acc);
    }
    bvh_ = std::make_unique<Bvh>(shapes_);
}

Scene::~Scene() = default;
Scene::Scene(const Scene& o)
    : camera_(o.camera_),
      materials_(o.materials_),
      shapes_(o.shapes_),
      emitters_(o.emitters_),
      emitter_cdf_(o.emitter_cdf_),
      bvh_(std::make_unique<Bvh>(*o.bvh_)) {}
Scene& Scene::operator=(const Scene& o) {
    if (this != &o) *this = Scene(o);
    return *this;
}
Scene::Scene(Scene&&) noexcept = default;
Scene& Scene::operator=(Scene&&) noexcept = default;

void Scene::validate() const {
    camera_.validate();
    std::set<std::string> names;
    for (std::size_t m = 0; m < materials_.size(); ++m) {
        const std::string path = "materials." + materials_[m].name;
        if (materials_[m].name.empty()) throw ValidationError("materials: empty material name");
        if (!names.insert(materials_[m].name).second) throw ValidationError(path + ": duplicate material name");
        const auto& kind = materials_[m].material.kind;
        if (const auto* d = std::get_if<Diffuse>(&kind)) check_spectrum(d->albedo, 1.0, path + ".albedo");
        if (const auto* r = std::get_if<Mirror>(&kind)) check_spectrum(r->reflectance, 1.0, path + ".reflectance");
        if (const auto* g = std::get_if<Dielectric>(&kind)) {
            if (!(g->ior > 0.0) || !std::isfinite(g->ior)) throw ValidationError(path + ".ior: must be > 0");
        }
    }
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
        const Shape& s = shapes_[i];
        const std::string path = shape_path(i);
        if (s.material >= materials_.size()) throw ValidationError(path + ".material: unknown material reference");
        if (s.emission) check_spectrum(*s.emission, kInfinity, path + ".emission");
        if (const auto* sp = std::get_if<Sphere>(&s.geometry)) {
            if (!is_finite(sp->center)) throw ValidationError(path + ".center: non-finite");
            if (!(sp->radius > 0.0) || !std::isfinite(sp->radius)) throw ValidationError(path + ".radius: must be > 0");
        } else if (const auto* q = std::get_if<Quad>(&s.geometry)) {
            if (!is_finite(q->corner) || !is_finite(q->edge_u) || !is_finite(q->edge_v)) {
                throw ValidationError(path + ": non-finite quad vector");
            }
            const double n = length(cross(q->edge_u, q->edge_v));
            if (!(n > 1e-12 * std::max(1e-300, length(q->edge_u) * length(q->edge_v)))) {
                throw ValidationError(path + ".edge_v: quad edges must be linearly independent");
            }
        } else {
            const auto& mesh = std::get<TriangleMesh>(s.geometry);
            if (s.emission) throw ValidationError(path + ".emission: triangle meshes cannot be emitters");
            if (mesh.indices.empty()) throw ValidationError(path + ".indices: mesh has no triangles");
            for (const auto& v : mesh.vertices) {
                if (!is_finite(v)) throw ValidationError(path + ".vertices: non-finite vertex");
            }
            for (std::size_t t = 0; t < mesh.indices.size(); ++t) {
                for (std::uint32_t v : mesh.indices[t]) {
                    if (v >= mesh.vertices.size()) {
                        throw ValidationError(path + ".indices[" + std::to_string(t) + "]: vertex index out of range");
                    }
                }
                const auto& tri = mesh.indices[t];
                const Vec3 n = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                                     mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
                if (!(length_squared(n) > 0.0)) {
                    throw ValidationError(path + ".indices[" + std::to_string(t) + "]: degenerate triangle");
                }
            }
        }
    }
}

std::optional<SurfaceInteraction> Scene::make_interaction(const Ray& ray, std::size_t shape,
                                                          const PrimitiveHit& hit) const {
    SurfaceInteraction it;
    it.t = hit.t;
    it.position = ray.at(hit.t);
    it.shape = shape;
    it.material = shapes_[shape].material;
    it.wo = UnitVec3::unchecked(-ray.direction);
    it.geometric_normal = UnitVec3::unchecked(hit.geometric_normal);
    it.front_face = dot(it.wo.vec(), hit.geometric_normal) > 0.0;
    it.normal = it.front_face ? it.geometric_normal : -it.geometric_normal;
    if (shapes_[shape].emission && it.front_face) it.emission = *shapes_[shape].emission;
    return it;
}

std::optional<SurfaceInteraction> Scene::intersect(const Ray& ray, double t_max) const {
    const auto hit = bvh_->intersect(shapes_, ray, kRayEpsilon, t_max);
    if (!hit) return std::nullopt;
    return make_interaction(ray, hit->prim.shape, hit->hit);
}

std::optional<SurfaceInteraction> Scene::intersect_brute_force(const Ray& ray, double t_max) const {
    std::optional<BvhHit> best;
    for (const PrimitiveRef& prim : enumerate_primitives(shapes_)) {
        if (auto hit = intersect_primitive(shapes_, prim, ray, kRayEpsilon, t_max)) {
            t_max = hit->t;
            best = BvhHit{prim, *hit};
        }
    }
    if (!best) return std::nullopt;
    return make_interaction(ray, best->prim.shape, best->hit);
}

bool Scene::occluded(const Point3& from, const Point3& to) const {
    const Vec3 d = to - from;
    const double dist = length(d);
    if (dist <= 2.0 * kRayEpsilon) return false;
    const Ray ray{from, d / dist};
    return bvh_->any_hit(shapes_, ray, kRayEpsilon, dist - kRayEpsilon);
}

std::size_t Scene::primitive_count() const { return bvh_->primitive_count(); }

RgbSpectrum Scene::emitter_power(std::size_t shape) const {
    const Shape& s = shapes_[shape];
    if (!s.emission) return {};
    return *s.emission * (kPi * s.area());
}

RgbSpectrum Scene::total_power() const {
    RgbSpectrum p;
    for (std::size_t s : emitters_) p += emitter_power(s);
    return p;
}

double Scene::emitter_selection_probability(std::size_t shape) const {
    if (emitters_.empty()) return 0.0;
    const auto it = std::find(emitters_.begin(), emitters_.end(), shape);
    if (it == emitters_.end()) return 0.0;
    return emitter_power(shape).average() / emitter_cdf_.back();
}

double Scene::emitter_pdf_area(std::size_t shape) const {
    return emitter_selection_probability(shape) / shapes_[shape].area();
}

EmitterPoint Scene::sample_emitter_point(double u_select, double u1, double u2) const {
    if (emitters_.empty()) throw RuntimeError("scene has no emitters");
    const double target = u_select * emitter_cdf_.back();
    std::size_t k = static_cast<std::size_t>(std::upper_bound(emitter_cdf_.begin(), emitter_cdf_.end(), target) -
                                              emitter_cdf_.begin());
    k = std::min(k, emitters_.size() - 1);
    const std::size_t shape = emitters_[k];
    const Shape& s = shapes_[shape];

    EmitterPoint ep;
    ep.shape = shape;
    ep.radiance = *s.emission;
    ep.pdf_area = emitter_pdf_area(shape);
    if (const auto* q = std::get_if<Quad>(&s.geometry)) {
        ep.position = q->corner + u1 * q->edge_u + u2 * q->edge_v;
        ep.normal = UnitVec3(cross(q->edge_u, q->edge_v));
    } else {
        const auto& sp = std::get<Sphere>(s.geometry);
        const double z = 1.0 - 2.0 * u1;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * kPi * u2;
        const Vec3 n{r * std::cos(phi), r * std::sin(phi), z};
        ep.normal = UnitVec3(n);
        ep.position = sp.center + sp.radius * ep.normal.vec();
    }
    return ep;
}

PhotonEmission Scene::sample_light_emission(Rng& rng, std::uint64_t photon_count) const {
    if (emitters_.empty()) throw RuntimeError("cannot emit photons: scene has no emitters");
    const double u_select = rng.uniform();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const EmitterPoint ep = sample_emitter_point(u_select, u1, u2);
    const DirectionSample dir = sample_cosine_hemisphere(rng.uniform(), rng.uniform(), ep.normal);
    // Cosine emission from a uniformly chosen point carries power / (p_select * N).
    const double p_select = emitter_selection_probability(ep.shape);
    const RgbSpectrum flux = emitter_power(ep.shape) / (p_select * static_cast<double>(photon_count));
    return {Ray{ep.position, dir.direction.vec()}, flux};
}

Bounds3 Scene::bounds() const {
    Bounds3 b;
    for (const PrimitiveRef& p : bvh_->primitives()) b.extend(primitive_bounds(shapes_, p));
    return b;
}

}  // namespace gpf
