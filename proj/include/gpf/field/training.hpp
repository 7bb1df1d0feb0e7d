// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpf/core/image.hpp"
#include "gpf/field/field.hpp"
#include "gpf/integrators/sppm.hpp"

namespace gpf {

/// Supervision record at a first-diffuse camera hit. `reference` is the local
/// outgoing radiance at `position`, without the camera-path throughput.
struct TrainingSample {
    Point3 position;
    UnitVec3 wo;
    RgbSpectrum reference;

    friend bool operator==(const TrainingSample& a, const TrainingSample& b) {
        return a.position == b.position && a.wo.vec() == b.wo.vec() && a.reference == b.reference;
    }
};

struct DatasetConfig {
    SppmConfig sppm;
    int samples_per_pixel = 1;
    std::uint64_t seed = 0;  // camera jitter and delta-lobe choices
};

/// Traces every pixel of every camera to its first diffuse hit through delta
/// bounces only and records (x, wo, L_ref) with L_ref from
/// reference_radiance_at_points. Pixels that miss, reach an emitter, or run out
/// of depth produce no sample. Throws RuntimeError if no sample is collected.
std::vector<TrainingSample> build_dataset(const Scene& scene, std::span<const Camera> cameras,
                                          const DatasetConfig& cfg);

/// Same, also returning the surface interactions of the samples.
std::vector<TrainingSample> build_dataset(const Scene& scene, std::span<const Camera> cameras,
                                          const DatasetConfig& cfg, std::vector<SurfaceInteraction>* hits);

struct TrainConfig {
    double learning_rate = 5e-4;
    int steps = 10000;
    std::size_t batch_size = 4096;  // 0 or >= dataset size: full batch
    int rebuild_every = 100;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainLog {
    std::vector<double> loss;  // minibatch loss per step
    double initial_loss = 0.0;  // full-dataset loss before the first step
    double final_loss = 0.0;   // full-dataset loss after training, fresh index
};

/// Full-dataset MSE: mean over samples of |L(x) - L_ref|^2 using query_radiance.
/// Requires a fresh index.
double dataset_loss(const GpfField& field, std::span<const TrainingSample> dataset);

/// Minibatch Adam on the mean squared radiance error. Means move freely,
/// rotations take an ambient step and are renormalized, scales step in log
/// space and are clamped to [kMinScale, kMaxScale], fluxes are unconstrained.
/// Neighborhoods come from a snapshot index rebuilt every rebuild_every steps;
/// the field's own index is rebuilt before returning. Gradients are reduced in
/// batch order, so the result does not depend on the thread count.
/// Throws RuntimeError on a non-finite loss, naming the step and sample.
TrainLog train(GpfField& field, std::span<const TrainingSample> dataset, const TrainConfig& cfg,
               const std::function<void(int step, double loss)>& on_step = {});

struct GpfRenderConfig {
    int samples_per_pixel = 4;
    std::uint64_t seed = 0;
    /// Multiply the field value by the diffuse albedo at the query point. Off by
    /// default: the supervision already includes the BSDF.
    bool bsdf_modulation = false;
};

/// Camera pass against the field: delta bounces are traced, emitters reached
/// through them add throughput * L_e, and the first diffuse hit adds
/// throughput * field(x) and ends the path. Pixels are clamped at zero.
RadianceImage render_gpf(const Scene& scene, const Camera& camera, const GpfField& field,
                         const GpfRenderConfig& cfg = {});

}  // namespace gpf
