// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpf/core/image.hpp"
#include "gpf/integrators/photon.hpp"

namespace gpf {

struct SppmConfig {
    int iterations = 1000;
    std::uint64_t photons_per_iteration = 100000;
    double initial_radius = 0.02;
    double alpha = 0.7;
    int max_photon_bounces = 16;
    std::uint64_t seed = 0;

    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

/// Gather radius of iteration t (0-based): r(0) = r0 and
/// r(t+1) = r(t) * sqrt((t + alpha) / (t + 1)).
double sppm_radius(int t, double r0, double alpha);

/// Density estimate of outgoing radiance at a diffuse hit:
/// (1 / (pi r^2)) * sum over photons within r of flux * f_r(incident, wo).
RgbSpectrum kde_gather(const PhotonMap& map, const Scene& scene, const SurfaceInteraction& it, double r);

/// Photon map of iteration `pass`; render_sppm and reference_radiance_at_points
/// use identical maps for equal (seed, pass).
PhotonMap sppm_photon_map(const Scene& scene, const SppmConfig& cfg, int pass);

/// Per-iteration independent photon maps; each iteration traces one jittered
/// camera ray per pixel to its first diffuse hit and gathers with radius r(t).
/// The image is the mean of the per-iteration frames.
RadianceImage render_sppm(const Scene& scene, const Camera& camera, const SppmConfig& cfg);

/// Mean over iterations of the per-iteration gather at each supervision point.
/// Every point must lie on a diffuse surface (RuntimeError otherwise).
std::vector<RgbSpectrum> reference_radiance_at_points(const Scene& scene, std::span<const SurfaceInteraction> points,
                                                      const SppmConfig& cfg);

}  // namespace gpf
