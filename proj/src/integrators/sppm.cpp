// SPDX-License-Identifier: Apache-2.0
#include "gpf/integrators/sppm.hpp"

#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"
#include "gpf/integrators/camera_path.hpp"

namespace gpf {

void SppmConfig::validate() const {
    if (iterations < 1) throw ValidationError("sppm.iterations: must be >= 1");
    if (photons_per_iteration < 1) throw ValidationError("sppm.photons: must be >= 1");
    if (!(initial_radius > 0.0) || !std::isfinite(initial_radius)) throw ValidationError("sppm.r0: must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("sppm.alpha: must lie in (0, 1]");
    if (max_photon_bounces < 1) throw ValidationError("sppm.max_photon_bounces: must be >= 1");
}

double sppm_radius(int t, double r0, double alpha) {
    double r = r0;
    for (int j = 0; j < t; ++j) r *= std::sqrt((j + alpha) / (j + 1.0));
    return r;
}

RgbSpectrum kde_gather(const PhotonMap& map, const Scene& scene, const SurfaceInteraction& it, double r) {
    const Material& material = scene.material_of(it);
    RgbSpectrum sum;
    for (const Neighbor& n : map.index().ball_query(it.position, r)) {
        const Photon& p = map.photons()[n.id];
        sum += p.flux * eval_bsdf(material, it, p.incident.vec(), it.wo.vec());
    }
    return sum / (kPi * r * r);
}

PhotonMap sppm_photon_map(const Scene& scene, const SppmConfig& cfg, int pass) {
    PhotonTraceConfig pt;
    pt.photon_count = cfg.photons_per_iteration;
    pt.max_bounces = cfg.max_photon_bounces;
    pt.seed = cfg.seed;
    pt.pass = static_cast<std::uint64_t>(pass);
    return PhotonMap(trace_photons(scene, pt));
}

RadianceImage render_sppm(const Scene& scene, const Camera& camera, const SppmConfig& cfg) {
    cfg.validate();
    camera.validate();
    RadianceImage image(camera.width, camera.height);
    const std::size_t n_pixels = camera.pixel_count();

    for (int t = 0; t < cfg.iterations; ++t) {
        const PhotonMap map = sppm_photon_map(scene, cfg, t);
        const double radius = sppm_radius(t, cfg.initial_radius, cfg.alpha);
        parallel_for(n_pixels, [&](std::size_t pixel) {
            Rng rng(cfg.seed, Stream::Camera, {static_cast<std::uint64_t>(t), pixel, 0});
            const Ray ray = jittered_camera_ray(camera, pixel, rng);
            const CameraPath path = trace_to_first_diffuse(scene, ray, rng);
            RgbSpectrum l;
            if (path.end == CameraPath::End::Emitter) {
                l = path.emitted;
            } else if (path.end == CameraPath::End::Diffuse) {
                l = path.throughput * kde_gather(map, scene, *path.hit, radius);
            }
            image.pixels[pixel] += l;
        });
    }
    for (auto& p : image.pixels) p /= static_cast<double>(cfg.iterations);
    return image;
}

std::vector<RgbSpectrum> reference_radiance_at_points(const Scene& scene, std::span<const SurfaceInteraction> points,
                                                      const SppmConfig& cfg) {
    cfg.validate();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!scene.material_of(points[i]).is_diffuse()) {
            throw RuntimeError("reference radiance requested at non-diffuse point " + std::to_string(i));
        }
    }
    std::vector<RgbSpectrum> out(points.size());
    for (int t = 0; t < cfg.iterations; ++t) {
        const PhotonMap map = sppm_photon_map(scene, cfg, t);
        const double radius = sppm_radius(t, cfg.initial_radius, cfg.alpha);
        parallel_for(points.size(), [&](std::size_t i) { out[i] += kde_gather(map, scene, points[i], radius); });
    }
    for (auto& l : out) l /= static_cast<double>(cfg.iterations);
    return out;
}

}  // namespace gpf
