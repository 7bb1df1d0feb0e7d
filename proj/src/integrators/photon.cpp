// SPDX-License-Identifier: Apache-2.0
#include "gpf/integrators/photon.hpp"

#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"

namespace gpf {

namespace {
constexpr std::uint64_t kPhotonsPerBlock = 1024;
constexpr int kRouletteStart = 3;
}  // namespace

std::vector<Photon> trace_photons(const Scene& scene, const PhotonTraceConfig& cfg) {
    if (!scene.has_emitters()) throw RuntimeError("cannot trace photons: scene has no emitters");
    if (cfg.photon_count == 0) return {};

    const std::uint64_t blocks = (cfg.photon_count + kPhotonsPerBlock - 1) / kPhotonsPerBlock;
    std::vector<std::vector<Photon>> per_block(blocks);

    parallel_for(blocks, [&](std::size_t b) {
        std::vector<Photon>& out = per_block[b];
        const std::uint64_t begin = b * kPhotonsPerBlock;
        const std::uint64_t end = std::min(cfg.photon_count, begin + kPhotonsPerBlock);
        for (std::uint64_t i = begin; i < end; ++i) {
            Rng rng(cfg.seed, Stream::Photon, {cfg.pass, i});
            const PhotonEmission emission = scene.sample_light_emission(rng, cfg.photon_count);
            Ray ray = emission.ray;
            RgbSpectrum throughput{1.0};

            for (int bounce = 0; bounce < cfg.max_bounces; ++bounce) {
                const auto hit = scene.intersect(ray);
                if (!hit) break;
                const Material& material = scene.material_of(*hit);
                if (material.is_diffuse()) {
                    out.push_back({hit->position, emission.flux * throughput, hit->wo});
                }
                const BsdfSample bs = sample_bsdf(material, *hit, rng, TransportMode::Importance);
                throughput *= bs.f_over_pdf;
                if (throughput.is_black()) break;
                if (bounce + 1 >= kRouletteStart) {
                    const double survive = std::min(1.0, throughput.max_component());
                    if (rng.uniform() >= survive) break;
                    throughput /= survive;
                }
                ray = Ray{hit->position, bs.wi.vec()};
            }
        }
    }, 1);

    std::size_t total = 0;
    for (const auto& v : per_block) total += v.size();
    std::vector<Photon> photons;
    photons.reserve(total);
    for (auto& v : per_block) photons.insert(photons.end(), v.begin(), v.end());
    return photons;
}

PhotonMap::PhotonMap(std::vector<Photon> photons) : photons_(std::move(photons)) {
    std::vector<Point3> positions;
    positions.reserve(photons_.size());
    for (const Photon& p : photons_) positions.push_back(p.position);
    index_ = PointIndex(positions);
}

}  // namespace gpf
