// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "gpf/scene/scene.hpp"
#include "gpf/spatial/point_index.hpp"

namespace gpf {

/// Light-tracing sample stored at a diffuse surface.
struct Photon {
    Point3 position;
    RgbSpectrum flux;   // watts
    UnitVec3 incident;  // points back toward where the photon came from
};

struct PhotonTraceConfig {
    std::uint64_t photon_count = 100000;
    int max_bounces = 16;
    std::uint64_t seed = 0;
    std::uint64_t pass = 0;  // SPPM iteration; keys the random streams
};

/// Emits photon_count photons from the scene's emitters and follows each
/// through up to max_bounces surface interactions. A photon is stored at every
/// diffuse hit and the path continues by BSDF sampling; delta hits continue
/// without storage. Russian roulette starts after the third bounce with
/// survival probability min(1, max throughput channel).
///
/// Photon i draws from Rng(seed, Stream::Photon, {pass, i}), so the list is the
/// same for any thread count. Throws RuntimeError if the scene has no emitters.
std::vector<Photon> trace_photons(const Scene& scene, const PhotonTraceConfig& cfg);

/// Photons plus a KD-tree over their positions.
class PhotonMap {
public:
    PhotonMap() = default;
    explicit PhotonMap(std::vector<Photon> photons);

    const std::vector<Photon>& photons() const { return photons_; }
    const PointIndex& index() const { return index_; }
    std::size_t size() const { return photons_.size(); }

private:
    std::vector<Photon> photons_;
    PointIndex index_;
};

}  // namespace gpf
