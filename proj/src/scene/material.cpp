// SPDX-License-Identifier: Apache-2.0
#include "gpf/scene/material.hpp"

#include "gpf/core/sampling.hpp"
#include "gpf/scene/scene.hpp"

namespace gpf {

double fresnel_dielectric(double cos_i, double eta_i, double eta_t) {
    cos_i = std::clamp(cos_i, 0.0, 1.0);
    const double sin_i2 = std::max(0.0, 1.0 - cos_i * cos_i);
    const double sin_t2 = (eta_i / eta_t) * (eta_i / eta_t) * sin_i2;
    if (sin_t2 >= 1.0) return 1.0;
    const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t2));
    const double rs = (eta_i * cos_i - eta_t * cos_t) / (eta_i * cos_i + eta_t * cos_t);
    const double rp = (eta_t * cos_i - eta_i * cos_t) / (eta_t * cos_i + eta_i * cos_t);
    return 0.5 * (rs * rs + rp * rp);
}

double fresnel_transmittance(double cos_i, double eta_i, double eta_t) {
    cos_i = std::clamp(cos_i, 0.0, 1.0);
    const double sin_i2 = std::max(0.0, 1.0 - cos_i * cos_i);
    const double sin_t2 = (eta_i / eta_t) * (eta_i / eta_t) * sin_i2;
    if (sin_t2 >= 1.0) return 0.0;
    const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t2));
    // Amplitude transmission coefficients; power ratio carries the
    // (eta_t cos_t) / (eta_i cos_i) beam-geometry factor.
    const double ts = 2.0 * eta_i * cos_i / (eta_i * cos_i + eta_t * cos_t);
    const double tp = 2.0 * eta_i * cos_i / (eta_t * cos_i + eta_i * cos_t);
    if (cos_i == 0.0) return 0.0;
    return 0.5 * (eta_t * cos_t) / (eta_i * cos_i) * (ts * ts + tp * tp);
}

BsdfSample sample_bsdf(const Material& material, const SurfaceInteraction& it, double u_lobe, double u1, double u2,
                       TransportMode mode) {
    const Vec3& n = it.normal.vec();
    const Vec3& wo = it.wo.vec();
    BsdfSample bs;

    if (const auto* d = std::get_if<Diffuse>(&material.kind)) {
        const DirectionSample ds = sample_cosine_hemisphere(u1, u2, it.normal);
        bs.wi = ds.direction;
        bs.pdf = ds.pdf;
        bs.f_over_pdf = ds.pdf > 0.0 ? d->albedo : RgbSpectrum{};
        bs.is_delta = false;
        return bs;
    }
    if (const auto* m = std::get_if<Mirror>(&material.kind)) {
        bs.wi = UnitVec3(reflect(wo, n));
        bs.f_over_pdf = m->reflectance;
        bs.is_delta = true;
        return bs;
    }

    const auto& g = std::get<Dielectric>(material.kind);
    const double eta_i = it.front_face ? 1.0 : g.ior;
    const double eta_t = it.front_face ? g.ior : 1.0;
    const double cos_i = std::clamp(dot(wo, n), 0.0, 1.0);
    const double fr = fresnel_dielectric(cos_i, eta_i, eta_t);
    bs.is_delta = true;
    if (u_lobe < fr) {
        bs.wi = UnitVec3(reflect(wo, n));
        bs.f_over_pdf = RgbSpectrum{1.0};
        return bs;
    }
    const double eta = eta_i / eta_t;
    const double sin_t2 = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);
    const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t2));
    bs.wi = UnitVec3(-eta * wo + (eta * cos_i - cos_t) * n);
    bs.f_over_pdf = RgbSpectrum{mode == TransportMode::Importance ? eta * eta : 1.0};
    return bs;
}

BsdfSample sample_bsdf(const Material& material, const SurfaceInteraction& it, Rng& rng, TransportMode mode) {
    const double u_lobe = rng.uniform();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return sample_bsdf(material, it, u_lobe, u1, u2, mode);
}

RgbSpectrum eval_bsdf(const Material& material, const SurfaceInteraction& it, const Vec3& wi, const Vec3& wo) {
    const auto* d = std::get_if<Diffuse>(&material.kind);
    if (!d) return {};
    const Vec3& n = it.normal.vec();
    if (dot(wi, n) <= 0.0 || dot(wo, n) <= 0.0) return {};
    return d->albedo * kInvPi;
}

double bsdf_pdf(const Material& material, const SurfaceInteraction& it, const Vec3& wi) {
    if (!material.is_diffuse()) return 0.0;
    return cosine_hemisphere_pdf(dot(wi, it.normal.vec()));
}

}  // namespace gpf
