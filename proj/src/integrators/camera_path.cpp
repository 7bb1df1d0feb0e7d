// SPDX-License-Identifier: Apache-2.0
#include "gpf/integrators/camera_path.hpp"

namespace gpf {

CameraPath trace_to_first_diffuse(const Scene& scene, Ray ray, Rng& rng, int max_depth) {
    CameraPath path;
    for (int depth = 0; depth < max_depth; ++depth) {
        auto hit = scene.intersect(ray);
        if (!hit) {
            path.end = CameraPath::End::Miss;
            return path;
        }
        if (scene.shapes()[hit->shape].is_emitter()) {
            path.end = CameraPath::End::Emitter;
            path.emitted = path.throughput * hit->emission;
            path.hit = std::move(hit);
            return path;
        }
        const Material& material = scene.material_of(*hit);
        if (material.is_diffuse()) {
            path.end = CameraPath::End::Diffuse;
            path.hit = std::move(hit);
            return path;
        }
        const BsdfSample bs = sample_bsdf(material, *hit, rng, TransportMode::Radiance);
        path.throughput *= bs.f_over_pdf;
        ray = Ray{hit->position, bs.wi.vec()};
    }
    path.end = CameraPath::End::DepthLimit;
    return path;
}

Ray jittered_camera_ray(const Camera& camera, std::size_t pixel, Rng& rng) {
    const auto px = static_cast<double>(pixel % static_cast<std::size_t>(camera.width));
    const auto py = static_cast<double>(pixel / static_cast<std::size_t>(camera.width));
    const double jx = rng.uniform();
    const double jy = rng.uniform();
    return camera.generate_ray(px + jx, py + jy);
}

}  // namespace gpf
