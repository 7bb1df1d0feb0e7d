// SPDX-License-Identifier: Apache-2.0
#include "gpf/field/field.hpp"

#include "gpf/core/error.hpp"
#include "gpf/core/sampling.hpp"

namespace gpf {

namespace {

double falloff_length(double r) { return std::max(r, 1e-6); }

/// Kernel value with the intermediates the backward pass needs.
struct Kernel {
    Mat3 rotation;
    Vec3 offset;      // x - mean
    Vec3 normalized;  // (R^T offset) / scale, per axis
    double dist = 0.0;
    double gauss = 0.0;
    double falloff = 1.0;
    double t = 0.0;  // normalized excess distance, 0 inside the radius
    double weight = 0.0;
};

Kernel eval_kernel(const GaussianPrimitive& p, const Point3& x, double r) {
    Kernel k;
    k.rotation = quaternion_to_matrix(p.rotation);
    k.offset = x - p.mean;
    const Vec3 local = k.rotation.transpose_mul(k.offset);
    k.normalized = {local.x / p.scale.x, local.y / p.scale.y, local.z / p.scale.z};
    k.gauss = std::exp(-0.5 * dot(k.normalized, k.normalized));
    k.dist = length(k.offset);
    if (k.dist > r) {
        k.t = (k.dist - r) / falloff_length(r);
        k.falloff = std::exp(-3.0 * k.t * k.t);
    }
    k.weight = k.gauss * k.falloff;
    return k;
}

}  // namespace

double distance_falloff(double dist, double r) {
    if (dist <= r) return 1.0;
    const double t = (dist - r) / falloff_length(r);
    return std::exp(-3.0 * t * t);
}

double gaussian_weight(const GaussianPrimitive& prim, const Point3& x, double r) {
    return eval_kernel(prim, x, r).weight;
}

GpfField::GpfField(std::vector<GaussianPrimitive> primitives, FieldParams params)
    : primitives_(std::move(primitives)), params_(params) {
    rebuild_index();
}

std::vector<GaussianPrimitive>& GpfField::mutable_primitives() {
    ++version_;
    return primitives_;
}

void GpfField::rebuild_index() {
    std::vector<Point3> means;
    means.reserve(primitives_.size());
    for (const auto& p : primitives_) means.push_back(p.mean);
    index_ = PointIndex(means);
    index_version_ = version_;
}

FieldQuery GpfField::query(const Point3& x) const {
    if (!index_fresh()) throw RuntimeError("field query against a stale spatial index; call rebuild_index()");
    return evaluate(x, index_.hybrid_query(x, params_.radius, params_.k_min));
}

FieldQuery GpfField::evaluate(const Point3& x, std::vector<std::uint32_t> ids) const {
    FieldQuery q;
    q.position = x;
    q.version = version_;
    q.ids = std::move(ids);
    q.weights.reserve(q.ids.size());
    RgbSpectrum weighted;
    for (std::uint32_t id : q.ids) {
        const GaussianPrimitive& p = primitives_.at(id);
        const double w = gaussian_weight(p, x, params_.radius);
        q.weights.push_back(w);
        q.weight_sum += w;
        weighted += w * p.flux;
    }
    q.radiance = weighted / std::max(q.weight_sum, params_.epsilon);
    return q;
}

std::vector<PrimitiveGradient> GpfField::query_gradients(const FieldQuery& q, const RgbSpectrum& d_radiance) const {
    if (q.version != version_) {
        throw RuntimeError("stale neighborhood: field parameters changed since the query was evaluated");
    }
    const double r = params_.radius;
    const bool normalized = q.weight_sum >= params_.epsilon;
    const double denom = normalized ? q.weight_sum : params_.epsilon;

    std::vector<PrimitiveGradient> grads;
    grads.reserve(q.ids.size());
    for (std::size_t n = 0; n < q.ids.size(); ++n) {
        const GaussianPrimitive& p = primitives_.at(q.ids[n]);
        const Kernel k = eval_kernel(p, q.position, r);

        PrimitiveGradient g;
        g.id = q.ids[n];
        g.flux = d_radiance * (k.weight / denom);

        // dLoss/dw through the (possibly floored) normalization.
        double d_weight = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double dl_dw = normalized ? (p.flux[c] - q.radiance[c]) / q.weight_sum : p.flux[c] / params_.epsilon;
            d_weight += d_radiance[c] * dl_dw;
        }

        // Gaussian factor. With n = R^T d / s:  dg/dmean = g * R (n / s),
        // dg/dlog_s_k = g * n_k^2,  dg/dR_jk = -g * d_j * n_k / s_k.
        const Vec3 n_over_s{k.normalized.x / p.scale.x, k.normalized.y / p.scale.y, k.normalized.z / p.scale.z};
        const Vec3 dgauss_dmean = k.gauss * (k.rotation * n_over_s);
        Vec3 dw_dmean = k.falloff * dgauss_dmean;
        if (k.dist > r) {
            // dpsi/dmean = psi * 6t / max(r, 1e-6) * d / |d|
            dw_dmean += k.gauss * (k.falloff * 6.0 * k.t / falloff_length(r) / k.dist) * k.offset;
        }
        g.mean = d_weight * dw_dmean;

        const double dw_gauss = d_weight * k.falloff * k.gauss;
        g.log_scale = {dw_gauss * k.normalized.x * k.normalized.x, dw_gauss * k.normalized.y * k.normalized.y,
                       dw_gauss * k.normalized.z * k.normalized.z};

        double G[3][3];
        for (int j = 0; j < 3; ++j) {
            for (int c = 0; c < 3; ++c) G[j][c] = -dw_gauss * k.offset[j] * n_over_s[c];
        }
        const double qn = p.rotation.norm();
        const double w = p.rotation.w / qn, x = p.rotation.x / qn, y = p.rotation.y / qn, z = p.rotation.z / qn;
        const double gw = 2.0 * (-z * G[0][1] + y * G[0][2] + z * G[1][0] - x * G[1][2] - y * G[2][0] + x * G[2][1]);
        const double gx = 2.0 * (y * G[0][1] + z * G[0][2] + y * G[1][0] - 2.0 * x * G[1][1] - w * G[1][2] +
                                 z * G[2][0] + w * G[2][1] - 2.0 * x * G[2][2]);
        const double gy = 2.0 * (-2.0 * y * G[0][0] + x * G[0][1] + w * G[0][2] + x * G[1][0] + z * G[1][2] -
                                 w * G[2][0] + z * G[2][1] - 2.0 * y * G[2][2]);
        const double gz = 2.0 * (-2.0 * z * G[0][0] - w * G[0][1] + x * G[0][2] + w * G[1][0] - 2.0 * z * G[1][1] +
                                 y * G[1][2] + x * G[2][0] + y * G[2][1]);
        // Chain through q / |q|: project out the radial part and scale by 1/|q|.
        const double radial = gw * w + gx * x + gy * y + gz * z;
        g.rotation = {(gw - radial * w) / qn, (gx - radial * x) / qn, (gy - radial * y) / qn, (gz - radial * z) / qn};

        grads.push_back(g);
    }
    return grads;
}

GpfField init_from_photons(std::span<const Photon> photons, double s0, std::uint64_t seed, const FieldParams& params,
                           std::size_t max_primitives) {
    if (photons.empty()) throw RuntimeError("cannot initialize from empty photon map");
    if (!(s0 > 0.0)) throw ValidationError("gpf.scale0: must be > 0");
    std::size_t count = photons.size();
    if (max_primitives > 0) count = std::min(count, max_primitives);

    std::vector<GaussianPrimitive> prims(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, Stream::FieldInit, {i});
        prims[i].mean = photons[i].position;
        prims[i].rotation = sample_uniform_quaternion(rng).value();
        prims[i].scale = {s0, s0, s0};
        prims[i].flux = photons[i].flux;
    }
    return GpfField(std::move(prims), params);
}

}  // namespace gpf
