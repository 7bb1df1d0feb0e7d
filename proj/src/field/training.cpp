// SPDX-License-Identifier: Apache-2.0
#include "gpf/field/training.hpp"

#include <memory>
#include <sstream>

#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"
#include "gpf/integrators/camera_path.hpp"

namespace gpf {

namespace {

// Per-primitive parameter layout in the optimizer's flat vectors.
constexpr std::size_t kMean = 0;
constexpr std::size_t kRotation = 3;
constexpr std::size_t kLogScale = 7;
constexpr std::size_t kFlux = 10;
constexpr std::size_t kParamsPerPrimitive = 13;

void pack(const GaussianPrimitive& p, double* out) {
    for (int i = 0; i < 3; ++i) out[kMean + i] = p.mean[i];
    out[kRotation + 0] = p.rotation.w;
    out[kRotation + 1] = p.rotation.x;
    out[kRotation + 2] = p.rotation.y;
    out[kRotation + 3] = p.rotation.z;
    for (int i = 0; i < 3; ++i) out[kLogScale + i] = std::log(p.scale[i]);
    for (int i = 0; i < 3; ++i) out[kFlux + i] = p.flux[i];
}

/// Writes optimizer state back. Scales are only re-exponentiated where the log
/// value moved, so untouched primitives keep their exact bits.
void unpack(const double* in, const bool* moved, GaussianPrimitive& p) {
    p.mean = {in[kMean], in[kMean + 1], in[kMean + 2]};
    p.rotation = {in[kRotation], in[kRotation + 1], in[kRotation + 2], in[kRotation + 3]};
    for (int i = 0; i < 3; ++i) {
        if (moved[kLogScale + i]) p.scale[i] = std::exp(in[kLogScale + i]);
    }
    p.flux = {in[kFlux], in[kFlux + 1], in[kFlux + 2]};
}

struct SampleResult {
    double loss = 0.0;
    std::vector<PrimitiveGradient> grads;
};

}  // namespace

std::vector<TrainingSample> build_dataset(const Scene& scene, std::span<const Camera> cameras,
                                          const DatasetConfig& cfg) {
    return build_dataset(scene, cameras, cfg, nullptr);
}

std::vector<TrainingSample> build_dataset(const Scene& scene, std::span<const Camera> cameras,
                                          const DatasetConfig& cfg, std::vector<SurfaceInteraction>* hits_out) {
    if (cfg.samples_per_pixel < 1) throw ValidationError("dataset.samples_per_pixel: must be >= 1");
    std::vector<SurfaceInteraction> hits;
    const auto spp = static_cast<std::size_t>(cfg.samples_per_pixel);
    for (std::size_t c = 0; c < cameras.size(); ++c) {
        const Camera& cam = cameras[c];
        cam.validate();
        std::vector<std::optional<SurfaceInteraction>> slots(cam.pixel_count() * spp);
        parallel_for(slots.size(), [&](std::size_t i) {
            const std::size_t pixel = i / spp;
            Rng rng(cfg.seed, Stream::Dataset, {c, pixel, i % spp});
            const CameraPath path = trace_to_first_diffuse(scene, jittered_camera_ray(cam, pixel, rng), rng);
            if (path.end == CameraPath::End::Diffuse) slots[i] = path.hit;
        });
        for (auto& s : slots) {
            if (s) hits.push_back(*s);
        }
    }
    if (hits.empty()) throw RuntimeError("no diffuse surface visible from the training cameras");

    const std::vector<RgbSpectrum> reference = reference_radiance_at_points(scene, hits, cfg.sppm);
    std::vector<TrainingSample> samples(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) samples[i] = {hits[i].position, hits[i].wo, reference[i]};
    if (hits_out) *hits_out = std::move(hits);
    return samples;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("train.lr: must be > 0");
    if (steps < 0) throw ValidationError("train.steps: must be >= 0");
    if (rebuild_every < 1) throw ValidationError("train.rebuild_every: must be >= 1");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw ValidationError("train.adam: betas must lie in (0, 1)");
    }
    if (!(adam_epsilon > 0.0)) throw ValidationError("train.adam_epsilon: must be > 0");
}

double dataset_loss(const GpfField& field, std::span<const TrainingSample> dataset) {
    if (dataset.empty()) return 0.0;
    std::vector<double> per_sample(dataset.size());
    parallel_for(dataset.size(), [&](std::size_t i) {
        const RgbSpectrum diff = field.query_radiance(dataset[i].position) - dataset[i].reference;
        per_sample[i] = diff.r * diff.r + diff.g * diff.g + diff.b * diff.b;
    });
    double sum = 0.0;
    for (double l : per_sample) sum += l;
    return sum / static_cast<double>(dataset.size());
}

TrainLog train(GpfField& field, std::span<const TrainingSample> dataset, const TrainConfig& cfg,
               const std::function<void(int, double)>& on_step) {
    cfg.validate();
    if (dataset.empty()) throw RuntimeError("cannot train on an empty dataset");
    if (!field.index_fresh()) field.rebuild_index();

    TrainLog log;
    log.initial_loss = dataset_loss(field, dataset);
    log.loss.reserve(static_cast<std::size_t>(cfg.steps));

    const std::size_t n_prims = field.size();
    std::vector<double> params(n_prims * kParamsPerPrimitive);
    for (std::size_t i = 0; i < n_prims; ++i) pack(field.primitives()[i], &params[i * kParamsPerPrimitive]);
    std::vector<double> grad(params.size()), m(params.size(), 0.0), v(params.size(), 0.0);
    std::unique_ptr<bool[]> moved(new bool[params.size()]());

    const bool full_batch = cfg.batch_size == 0 || cfg.batch_size >= dataset.size();
    const std::size_t batch = full_batch ? dataset.size() : cfg.batch_size;
    const FieldParams& fp = field.params();
    std::vector<std::size_t> picks(batch);
    std::vector<SampleResult> results(batch);
    PointIndex snapshot;
    const double log_min = std::log(kMinScale), log_max = std::log(kMaxScale);

    for (int step = 0; step < cfg.steps; ++step) {
        if (step % cfg.rebuild_every == 0) {
            std::vector<Point3> means(n_prims);
            for (std::size_t i = 0; i < n_prims; ++i) means[i] = field.primitives()[i].mean;
            snapshot = PointIndex(means);
        }

        if (full_batch) {
            for (std::size_t b = 0; b < batch; ++b) picks[b] = b;
        } else {
            Rng rng(cfg.seed, Stream::Batch, {static_cast<std::uint64_t>(step)});
            for (std::size_t b = 0; b < batch; ++b) picks[b] = rng.uniform_index(dataset.size());
        }

        const double inv_batch = 1.0 / static_cast<double>(batch);
        parallel_for(batch, [&](std::size_t b) {
            const TrainingSample& s = dataset[picks[b]];
            const FieldQuery q = field.evaluate(s.position, snapshot.hybrid_query(s.position, fp.radius, fp.k_min));
            const RgbSpectrum residual = q.radiance - s.reference;
            results[b].loss = residual.r * residual.r + residual.g * residual.g + residual.b * residual.b;
            results[b].grads = field.query_gradients(q, residual * (2.0 * inv_batch));
        }, 16);

        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
            if (!std::isfinite(results[b].loss)) {
                std::ostringstream msg;
                msg << "non-finite loss at step " << step << ", sample " << picks[b] << " (position "
                    << dataset[picks[b]].position.x << ", " << dataset[picks[b]].position.y << ", "
                    << dataset[picks[b]].position.z << ")";
                throw RuntimeError(msg.str());
            }
            loss += results[b].loss;
            for (const PrimitiveGradient& g : results[b].grads) {
                double* dst = &grad[g.id * kParamsPerPrimitive];
                for (int i = 0; i < 3; ++i) dst[kMean + i] += g.mean[i];
                for (int i = 0; i < 4; ++i) dst[kRotation + i] += g.rotation[i];
                for (int i = 0; i < 3; ++i) dst[kLogScale + i] += g.log_scale[i];
                for (int i = 0; i < 3; ++i) dst[kFlux + i] += g.flux[i];
            }
        }
        loss *= inv_batch;
        log.loss.push_back(loss);

        const double t = step + 1.0;
        const double correction1 = 1.0 - std::pow(cfg.beta1, t);
        const double correction2 = 1.0 - std::pow(cfg.beta2, t);
        for (std::size_t i = 0; i < n_prims; ++i) {
            double* p = &params[i * kParamsPerPrimitive];
            double* g = &grad[i * kParamsPerPrimitive];
            // Tangent-space projection of the rotation gradient.
            const double qn = std::sqrt(p[kRotation] * p[kRotation] + p[kRotation + 1] * p[kRotation + 1] +
                                        p[kRotation + 2] * p[kRotation + 2] + p[kRotation + 3] * p[kRotation + 3]);
            double radial = 0.0;
            for (int k = 0; k < 4; ++k) radial += g[kRotation + k] * p[kRotation + k] / qn;
            for (int k = 0; k < 4; ++k) g[kRotation + k] -= radial * p[kRotation + k] / qn;

            for (std::size_t k = 0; k < kParamsPerPrimitive; ++k) {
                const std::size_t j = i * kParamsPerPrimitive + k;
                m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[k];
                v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[k] * g[k];
                const double m_hat = m[j] / correction1;
                const double v_hat = v[j] / correction2;
                const double delta = cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
                if (delta != 0.0) {
                    p[k] -= delta;
                    moved[j] = true;
                }
            }

            bool* mv = &moved[i * kParamsPerPrimitive];
            if (mv[kRotation] || mv[kRotation + 1] || mv[kRotation + 2] || mv[kRotation + 3]) {
                const double norm = std::sqrt(p[kRotation] * p[kRotation] + p[kRotation + 1] * p[kRotation + 1] +
                                              p[kRotation + 2] * p[kRotation + 2] + p[kRotation + 3] * p[kRotation + 3]);
                for (int k = 0; k < 4; ++k) p[kRotation + k] /= norm;
            }
            for (int k = 0; k < 3; ++k) {
                const double clamped = std::clamp(p[kLogScale + k], log_min, log_max);
                if (clamped != p[kLogScale + k]) mv[kLogScale + k] = true;
                p[kLogScale + k] = clamped;
            }
        }

        auto& prims = field.mutable_primitives();
        for (std::size_t i = 0; i < n_prims; ++i) {
            unpack(&params[i * kParamsPerPrimitive], &moved[i * kParamsPerPrimitive], prims[i]);
        }
        if (on_step) on_step(step, loss);
    }

    field.rebuild_index();
    log.final_loss = dataset_loss(field, dataset);
    return log;
}

RadianceImage render_gpf(const Scene& scene, const Camera& camera, const GpfField& field, const GpfRenderConfig& cfg) {
    if (cfg.samples_per_pixel < 1) throw ValidationError("gpf.spp: must be >= 1");
    camera.validate();
    if (!field.index_fresh()) throw RuntimeError("render_gpf: field index is stale; call rebuild_index()");
    RadianceImage image(camera.width, camera.height);
    parallel_for(camera.pixel_count(), [&](std::size_t pixel) {
        RgbSpectrum sum;
        for (int s = 0; s < cfg.samples_per_pixel; ++s) {
            Rng rng(cfg.seed, Stream::GpfRender, {pixel, static_cast<std::uint64_t>(s)});
            const CameraPath path = trace_to_first_diffuse(scene, jittered_camera_ray(camera, pixel, rng), rng);
            if (path.end == CameraPath::End::Emitter) {
                sum += path.emitted;
            } else if (path.end == CameraPath::End::Diffuse) {
                RgbSpectrum l = field.query_radiance(path.hit->position);
                if (cfg.bsdf_modulation) {
                    l *= std::get<Diffuse>(scene.material_of(*path.hit).kind).albedo;
                }
                sum += path.throughput * l;
            }
        }
        image.pixels[pixel] = clamp_zero(sum / static_cast<double>(cfg.samples_per_pixel));
    });
    return image;
}

}  // namespace gpf
