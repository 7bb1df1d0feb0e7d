// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "gpf/core/image.hpp"
#include "gpf/scene/scene.hpp"

namespace gpf {

struct PathTracerConfig {
    int samples_per_pixel = 64;
    /// Maximum number of scattering events; 1 gives direct lighting only.
    int max_depth = 16;
    std::uint64_t seed = 0;
};

/// Unidirectional path tracer with next-event estimation at diffuse vertices,
/// combined with BSDF sampling by the power heuristic. Russian roulette starts
/// after depth 3. Sample s of pixel p uses Rng(seed, Stream::PathTracer, {p, s}).
RadianceImage render_pt(const Scene& scene, const Camera& camera, const PathTracerConfig& cfg);

/// Radiance estimate of a single camera ray; exposed for tests.
RgbSpectrum path_trace_radiance(const Scene& scene, const Ray& ray, Rng& rng, int max_depth);

}  // namespace gpf
