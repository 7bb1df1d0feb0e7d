// SPDX-License-Identifier: Apache-2.0
#include "gpf/integrators/path_tracer.hpp"

#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"
#include "gpf/core/sampling.hpp"
#include "gpf/integrators/camera_path.hpp"

namespace gpf {

namespace {
constexpr int kRouletteDepth = 3;
}

RgbSpectrum path_trace_radiance(const Scene& scene, const Ray& camera_ray, Rng& rng, int max_depth) {
    RgbSpectrum radiance;
    RgbSpectrum beta{1.0};
    Ray ray = camera_ray;
    bool specular_bounce = true;
    double prev_bsdf_pdf = 0.0;
    Point3 prev_position = ray.origin;

    for (int depth = 0;; ++depth) {
        const auto hit = scene.intersect(ray);
        if (!hit) break;

        if (!hit->emission.is_black()) {
            if (specular_bounce) {
                radiance += beta * hit->emission;
            } else {
                const double dist2 = distance_squared(prev_position, hit->position);
                const double cos_light = dot(hit->geometric_normal.vec(), hit->wo.vec());
                const double light_pdf = scene.emitter_pdf_area(hit->shape) * dist2 / cos_light;
                radiance += beta * hit->emission * power_heuristic(prev_bsdf_pdf, light_pdf);
            }
        }
        if (depth == max_depth) break;

        const Material& material = scene.material_of(*hit);
        if (material.is_diffuse() && scene.has_emitters()) {
            const double u_sel = rng.uniform();
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            const EmitterPoint ep = scene.sample_emitter_point(u_sel, u1, u2);
            const Vec3 to_light = ep.position - hit->position;
            const double dist2 = length_squared(to_light);
            const Vec3 wi = to_light / std::sqrt(dist2);
            const double cos_light = -dot(ep.normal.vec(), wi);
            const double cos_surface = dot(hit->normal.vec(), wi);
            if (cos_light > 0.0 && cos_surface > 0.0 && !scene.occluded(hit->position, ep.position)) {
                const double light_pdf = ep.pdf_area * dist2 / cos_light;
                const double weight = power_heuristic(light_pdf, bsdf_pdf(material, *hit, wi));
                const RgbSpectrum f = eval_bsdf(material, *hit, wi, hit->wo.vec());
                radiance += beta * f * ep.radiance * (cos_surface * weight / light_pdf);
            }
        }

        const BsdfSample bs = sample_bsdf(material, *hit, rng, TransportMode::Radiance);
        beta *= bs.f_over_pdf;
        if (beta.is_black()) break;
        specular_bounce = bs.is_delta;
        prev_bsdf_pdf = bs.pdf;
        prev_position = hit->position;

        if (depth + 1 >= kRouletteDepth) {
            const double survive = std::min(1.0, beta.max_component());
            if (rng.uniform() >= survive) break;
            beta /= survive;
        }
        ray = Ray{hit->position, bs.wi.vec()};
    }
    return radiance;
}

RadianceImage render_pt(const Scene& scene, const Camera& camera, const PathTracerConfig& cfg) {
    if (cfg.samples_per_pixel < 1) throw ValidationError("pt.spp: must be >= 1");
    if (cfg.max_depth < 0) throw ValidationError("pt.max_depth: must be >= 0");
    camera.validate();
    RadianceImage image(camera.width, camera.height);
    parallel_for(camera.pixel_count(), [&](std::size_t pixel) {
        RgbSpectrum sum;
        for (int s = 0; s < cfg.samples_per_pixel; ++s) {
            Rng rng(cfg.seed, Stream::PathTracer, {pixel, static_cast<std::uint64_t>(s)});
            const Ray ray = jittered_camera_ray(camera, pixel, rng);
            sum += path_trace_radiance(scene, ray, rng, cfg.max_depth);
        }
        image.pixels[pixel] = sum / static_cast<double>(cfg.samples_per_pixel);
    }, 4);
    return image;
}

}  // namespace gpf
