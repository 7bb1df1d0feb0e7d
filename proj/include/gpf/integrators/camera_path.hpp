// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "gpf/core/rng.hpp"
#include "gpf/scene/scene.hpp"

namespace gpf {

/// Default bound on delta bounces along a camera path.
inline constexpr int kMaxCameraDepth = 16;

/// Outcome of following a camera ray through delta (mirror/dielectric) bounces
/// until it reaches something that ends the path.
struct CameraPath {
    enum class End { Miss, Emitter, Diffuse, DepthLimit };

    End end = End::Miss;
    RgbSpectrum throughput{1.0};  // product of f_over_pdf over the delta prefix
    RgbSpectrum emitted;          // throughput * L_e for End::Emitter
    std::optional<SurfaceInteraction> hit;  // the terminating interaction
};

/// Follows `ray` with unit throughput. An emitter hit ends the path and
/// contributes its radiance (every prefix here is delta-only). The first
/// diffuse hit ends the path so the caller can estimate radiance there.
CameraPath trace_to_first_diffuse(const Scene& scene, Ray ray, Rng& rng, int max_depth = kMaxCameraDepth);

/// Primary ray through pixel `pixel` (row-major) with a uniform jitter.
Ray jittered_camera_ray(const Camera& camera, std::size_t pixel, Rng& rng);

}  // namespace gpf
