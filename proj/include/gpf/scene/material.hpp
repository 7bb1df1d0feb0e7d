// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>

#include "gpf/core/math.hpp"
#include "gpf/core/rng.hpp"
#include "gpf/core/spectrum.hpp"

namespace gpf {

struct SurfaceInteraction;

/// Lambertian reflector, f_r = albedo / pi.
struct Diffuse {
    RgbSpectrum albedo{0.5};
};

/// Perfect specular reflector.
struct Mirror {
    RgbSpectrum reflectance{1.0};
};

/// Smooth dielectric interface; `ior` is the index on the geometric-normal's
/// opposite side relative to vacuum on the normal side.
struct Dielectric {
    double ior = 1.5;
};

struct Material {
    std::variant<Diffuse, Mirror, Dielectric> kind;

    bool is_diffuse() const { return std::holds_alternative<Diffuse>(kind); }
    bool is_delta() const { return !is_diffuse(); }
};

/// Camera paths carry radiance; photon paths carry flux (importance transport).
/// Only refraction treats the two differently.
enum class TransportMode { Radiance, Importance };

struct BsdfSample {
    UnitVec3 wi;
    RgbSpectrum f_over_pdf;  // f_r |cos| / pdf, the path throughput multiplier
    double pdf = 0.0;        // solid angle; 0 for delta lobes
    bool is_delta = false;
};

/// Unpolarized Fresnel reflectance for light arriving with cosine `cos_i`
/// (>= 0) in a medium of index eta_i at an interface to eta_t. Returns 1 under
/// total internal reflection.
double fresnel_dielectric(double cos_i, double eta_i, double eta_t);

/// Transmittance from the amplitude transmission coefficients, independent of
/// fresnel_dielectric; used to check energy balance.
double fresnel_transmittance(double cos_i, double eta_i, double eta_t);

/// Samples an incident direction for `it`. `u_lobe`, `u1`, `u2` are uniforms.
BsdfSample sample_bsdf(const Material& material, const SurfaceInteraction& it, double u_lobe, double u1, double u2,
                       TransportMode mode = TransportMode::Radiance);
BsdfSample sample_bsdf(const Material& material, const SurfaceInteraction& it, Rng& rng,
                       TransportMode mode = TransportMode::Radiance);

/// f_r(wi, wo). Zero for delta materials and for directions not both in the
/// hemisphere of the shading normal.
RgbSpectrum eval_bsdf(const Material& material, const SurfaceInteraction& it, const Vec3& wi, const Vec3& wo);

/// Solid-angle density sample_bsdf would assign to `wi`; zero for delta lobes.
double bsdf_pdf(const Material& material, const SurfaceInteraction& it, const Vec3& wi);

}  // namespace gpf
