// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpf/cli/manifest.hpp"
#include "gpf/core/sampling.hpp"
#include "gpf/field/checkpoint.hpp"
#include "gpf/field/training.hpp"
#include "gpf/integrators/path_tracer.hpp"
#include "gpf/integrators/sppm.hpp"
#include "gpf/io/image_io.hpp"
#include "gpf/io/metrics.hpp"
#include "gpf/scene/scene_io.hpp"

using namespace gpf;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------------------
// 1. Gradients

double objective(const std::vector<GaussianPrimitive>& prims, const FieldParams& fp, const Point3& x,
                 const RgbSpectrum& g) {
    const GpfField f(prims, fp);
    std::vector<std::uint32_t> ids(prims.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint32_t>(i);
    const RgbSpectrum l = f.evaluate(x, ids).radiance;
    return g.r * l.r + g.g * l.g + g.b * l.b;
}

Outcome gradient_oracle() {
    Rng rng(2024);
    FieldParams fp;
    fp.radius = 0.02;
    double worst = 0.0;
    int failures = 0, checks = 0;
    for (int config = 0; config < 100; ++config) {
        std::vector<GaussianPrimitive> prims(4);
        for (auto& p : prims) {
            p.mean = {0.06 * (rng.uniform() - 0.5), 0.06 * (rng.uniform() - 0.5), 0.06 * (rng.uniform() - 0.5)};
            p.rotation = sample_uniform_quaternion(rng).value();
            p.scale = {0.01 + 0.04 * rng.uniform(), 0.01 + 0.04 * rng.uniform(), 0.01 + 0.04 * rng.uniform()};
            p.flux = {rng.uniform() * 2 - 0.5, rng.uniform(), rng.uniform() * 3};
        }
        const Point3 x{0.01 * rng.uniform(), 0.01 * rng.uniform(), 0.01 * rng.uniform()};
        const RgbSpectrum g{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
        const GpfField field(prims, fp);
        std::vector<std::uint32_t> ids{0, 1, 2, 3};
        const auto grads = field.query_gradients(field.evaluate(x, ids), g);
        const double base = std::abs(objective(prims, fp, x, g)) + 1.0;

        auto check = [&](double analytic, std::size_t i, const std::function<double(GaussianPrimitive&, double)>& perturb) {
            auto plus = prims, minus = prims;
            const double h = perturb(plus[i], 1.0);
            perturb(minus[i], -1.0);
            const double numeric = (objective(plus, fp, x, g) - objective(minus, fp, x, g)) / (2 * h);
            const double roundoff = 8 * 2.3e-16 * base / h;
            const double err = std::abs(analytic - numeric);
            const double mag = std::max(std::abs(analytic), std::abs(numeric));
            ++checks;
            if (err > 1e-4 * mag + roundoff) ++failures;
            if (err > roundoff && mag > 0) worst = std::max(worst, (err - roundoff) / mag);
        };
        for (std::size_t i = 0; i < prims.size(); ++i) {
            for (int k = 0; k < 3; ++k) {
                check(grads[i].mean[k], i, [k](GaussianPrimitive& p, double s) {
                    const double h = 1e-6 * std::max(std::abs(p.mean[k]), 1e-2);
                    p.mean[k] += s * h;
                    return h;
                });
                check(grads[i].log_scale[k], i, [k](GaussianPrimitive& p, double s) {
                    p.scale[k] *= std::exp(s * 1e-6);
                    return 1e-6;
                });
                check(grads[i].flux[k], i, [k](GaussianPrimitive& p, double s) {
                    const double h = 1e-6 * std::max(std::abs(p.flux[k]), 1.0);
                    p.flux[k] += s * h;
                    return h;
                });
            }
            for (int k = 0; k < 4; ++k) {
                check(grads[i].rotation[k], i, [k](GaussianPrimitive& p, double s) {
                    double& c = k == 0 ? p.rotation.w : k == 1 ? p.rotation.x : k == 2 ? p.rotation.y : p.rotation.z;
                    c += s * 1e-6;
                    return 1e-6;
                });
            }
        }
    }
    return {failures == 0, std::to_string(checks) + " derivatives, " + std::to_string(failures) +
                               " over tolerance, worst relative error beyond roundoff " + fmt(worst, 3)};
}

// ---------------------------------------------------------------------------
// 2. Spatial queries

Outcome spatial_oracle() {
    Rng rng(77);
    std::vector<Point3> pts(10000);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    const PointIndex index(pts);
    int mismatches = 0;
    for (int q = 0; q < 100; ++q) {
        const Point3 x{rng.uniform(), rng.uniform(), rng.uniform()};
        const double r = 0.02 + 0.08 * rng.uniform();
        const std::size_t k = 1 + rng.uniform_index(20);
        std::vector<std::pair<double, std::uint32_t>> all(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) all[i] = {length_squared(pts[i] - x), static_cast<std::uint32_t>(i)};
        std::sort(all.begin(), all.end());
        std::vector<std::uint32_t> ball, knn;
        for (const auto& [d2, id] : all) {
            if (std::sqrt(d2) <= r) ball.push_back(id);
        }
        for (std::size_t i = 0; i < k; ++i) knn.push_back(all[i].second);
        std::vector<std::uint32_t> hybrid = ball;
        if (hybrid.size() < k) {
            for (std::uint32_t id : knn) {
                if (std::find(hybrid.begin(), hybrid.end(), id) == hybrid.end()) hybrid.push_back(id);
            }
        }
        auto sorted = [](std::vector<std::uint32_t> v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        auto ids_of = [](const std::vector<Neighbor>& ns) {
            std::vector<std::uint32_t> v;
            for (const Neighbor& n : ns) v.push_back(n.id);
            return v;
        };
        if (sorted(ids_of(index.ball_query(x, r))) != sorted(ball)) ++mismatches;
        if (ids_of(index.knn_query(x, k)) != knn) ++mismatches;
        if (sorted(index.hybrid_query(x, r, k)) != sorted(hybrid)) ++mismatches;
    }
    return {mismatches == 0, "10^4 points x 100 queries x {ball, kNN, hybrid}, " + std::to_string(mismatches) +
                                 " mismatches"};
}

// ---------------------------------------------------------------------------
// 3. Radius schedule

Outcome radius_schedule() {
    double worst = 0.0;
    bool decreasing = true, constant = true;
    double prev = kInfinity;
    for (int t = 0; t <= 10000; ++t) {
        const double r = sppm_radius(t, 0.02, 0.7);
        const double closed =
            0.02 * std::exp(0.5 * (std::lgamma(t + 0.7) - std::lgamma(0.7) - std::lgamma(t + 1.0)));
        worst = std::max(worst, std::abs(r - closed));
        decreasing = decreasing && r < prev;
        prev = r;
        constant = constant && sppm_radius(t, 0.02, 1.0) == 0.02;
    }
    return {worst < 1e-12 && decreasing && constant,
            "max |r - closed form| = " + fmt(worst, 3) + ", decreasing(0.7)=" + (decreasing ? "yes" : "no") +
                ", constant(1.0)=" + (constant ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 4. SPPM vs path tracing

double rmse(const RadianceImage& a, const RadianceImage& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const RgbSpectrum d = a.pixels[i] - b.pixels[i];
        s += d.r * d.r + d.g * d.g + d.b * d.b;
    }
    return std::sqrt(s / (3.0 * a.pixels.size()));
}

Outcome physical_agreement() {
    const Scene scene = builtin_scene("cornell-box");
    Camera cam = scene.camera();
    cam.width = cam.height = 64;
    PathTracerConfig pt;
    pt.samples_per_pixel = 4096;
    pt.seed = 1;
    const RadianceImage ref = render_pt(scene, cam, pt);

    SppmConfig sc;
    sc.iterations = 64;
    sc.photons_per_iteration = 50000;
    sc.seed = 2;
    const RadianceImage sppm = render_sppm(scene, cam, sc);
    const RgbSpectrum mr = ref.mean(), ms = sppm.mean();
    const double rel = std::abs(ms.average() - mr.average()) / mr.average();
    double rel_channel = 0;
    for (int c = 0; c < 3; ++c) rel_channel = std::max(rel_channel, std::abs(ms[c] - mr[c]) / mr[c]);

    double err[3] = {0, 0, 0};
    const int ts[3] = {4, 16, 64};
    for (int i = 0; i < 3; ++i) {
        for (std::uint64_t seed : {10u, 11u, 12u}) {
            SppmConfig c = sc;
            c.iterations = ts[i];
            c.seed = seed;
            err[i] += rmse(render_sppm(scene, cam, c), ref) / 3.0;
        }
    }
    const bool monotone = err[0] > err[1] && err[1] > err[2];
    return {rel < 0.05 && rel_channel < 0.05 && monotone,
            "mean relative difference " + fmt(100 * rel, 3) + "% (worst channel " + fmt(100 * rel_channel, 3) +
                "%), RMSE over T=4/16/64: " + fmt(err[0]) + " > " + fmt(err[1]) + " > " + fmt(err[2])};
}

// ---------------------------------------------------------------------------
// 5. Caustic ordering on a held-out view (and the checkpoint reused by 10)

Camera view_at(const Point3& pos, int res) {
    Camera c;
    c.position = pos;
    c.look_at = {0.0, -0.65, 0.0};
    c.fov_degrees = 40.0;
    c.width = c.height = res;
    return c;
}

Outcome caustic_ordering(const fs::path& work, const fs::path& checkpoint_out, const fs::path& camera_out) {
    const Scene scene = builtin_scene("caustic-sphere");
    const std::vector<Camera> views{view_at({0, 0.75, 3}, 128), view_at({0.9, 0.8, 2.8}, 128),
                                    view_at({-0.9, 0.7, 2.8}, 128)};
    const Camera held_out = view_at({0.45, 0.9, 2.9}, 128);
    write_text_file(camera_out, camera_to_json(held_out).dump(2) + "\n");

    DatasetConfig dc;
    dc.sppm.iterations = 64;
    dc.sppm.photons_per_iteration = 100000;
    dc.sppm.seed = 11;
    dc.seed = 11;
    const auto dataset = build_dataset(scene, views, dc);

    const PhotonMap map = sppm_photon_map(scene, dc.sppm, 0);
    GpfField field = init_from_photons(map.photons(), 0.01, 11, {}, 10000);
    TrainConfig tc;
    tc.steps = 2000;
    tc.seed = 11;
    const auto train_start = Clock::now();
    const TrainLog log = train(field, dataset, tc);
    const double train_seconds = seconds_since(train_start);
    save_checkpoint(checkpoint_out, field);

    SppmConfig ref_cfg = dc.sppm;
    ref_cfg.iterations = 256;
    ref_cfg.seed = 99;
    const RadianceImage reference = render_sppm(scene, held_out, ref_cfg);
    SppmConfig short_cfg = dc.sppm;
    short_cfg.iterations = 3;
    short_cfg.seed = 5;
    const RadianceImage sppm3 = render_sppm(scene, held_out, short_cfg);
    const RadianceImage gpf = render_gpf(scene, held_out, field, {});
    write_pfm(work / "caustic_reference.pfm", reference);
    write_pfm(work / "caustic_sppm3.pfm", sppm3);
    write_pfm(work / "caustic_gpf.pfm", gpf);

    const double p3 = psnr(reference, sppm3), s3 = ssim(reference, sppm3);
    const double pg = psnr(reference, gpf), sg = ssim(reference, gpf);
    return {pg > p3 && sg > s3,
            "held-out view: GPF PSNR " + fmt(pg) + " / SSIM " + fmt(sg) + " vs SPPM-3 PSNR " + fmt(p3) + " / SSIM " +
                fmt(s3) + " (" + std::to_string(dataset.size()) + " samples, loss " + fmt(log.initial_loss) + " -> " +
                fmt(log.final_loss) + ", training " + fmt(train_seconds, 3) + " s)"};
}

// ---------------------------------------------------------------------------
// 6. Training progress on the Cornell fixture

Outcome training_progress() {
    const Scene scene = builtin_scene("cornell-box");
    std::vector<Camera> views(3, scene.camera());
    views[1].position = {0.8, 0.2, 3.6};
    views[2].position = {-0.8, -0.2, 3.6};
    DatasetConfig dc;
    dc.sppm.iterations = 16;
    dc.sppm.photons_per_iteration = 100000;
    dc.sppm.seed = 7;
    dc.seed = 7;
    const auto dataset = build_dataset(scene, views, dc);
    const PhotonMap map = sppm_photon_map(scene, dc.sppm, 0);
    GpfField field = init_from_photons(map.photons(), 0.01, 7, {}, 10000);
    TrainConfig tc;
    tc.steps = 2000;
    tc.seed = 7;
    const TrainLog log = train(field, dataset, tc);

    const double ratio = log.final_loss / log.initial_loss;
    // 100-step moving average of the minibatch loss, compared with its running minimum.
    double window = 0, running_min = kInfinity, worst_rise = 0;
    for (std::size_t i = 0; i < log.loss.size(); ++i) {
        window += log.loss[i];
        if (i >= 100) window -= log.loss[i - 100];
        if (i + 1 < 100) continue;
        const double avg = window / 100.0;
        worst_rise = std::max(worst_rise, avg / running_min - 1.0);
        running_min = std::min(running_min, avg);
    }
    return {ratio <= 0.1 && worst_rise <= 0.05,
            "loss " + fmt(log.initial_loss) + " -> " + fmt(log.final_loss) + " (" + fmt(100 * ratio, 3) +
                "% of initial), largest moving-average rise " + fmt(100 * std::max(worst_rise, 0.0), 3) + "%"};
}

// ---------------------------------------------------------------------------
// 7. Trivial fields

Outcome trivial_fields() {
    Rng rng(5);
    // Dyadic coordinates keep x +- offset exact, so both kernels see the same distance.
    auto dyadic = [&](double span) { return static_cast<double>(rng.uniform_index(1024)) / 1024.0 * span; };
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        GaussianPrimitive p;
        p.mean = {dyadic(1), dyadic(1), dyadic(1)};
        p.rotation = sample_uniform_quaternion(rng).value();
        p.scale = {0.01 + 0.1 * rng.uniform(), 0.01 + 0.1 * rng.uniform(), 0.01 + 0.1 * rng.uniform()};
        p.flux = {10 * rng.uniform(), rng.uniform(), 1e-3 * rng.uniform()};
        const GpfField one({p}, {});
        if (!(one.query_radiance(p.mean) == p.flux)) ++bad;

        const Vec3 offset{dyadic(1.0 / 128), dyadic(1.0 / 128), dyadic(1.0 / 128)};
        GaussianPrimitive a = p, b = p;
        a.mean = p.mean + offset;
        b.mean = p.mean - offset;
        b.flux = {rng.uniform(), 5 * rng.uniform(), rng.uniform()};
        const GpfField two({a, b}, {});
        const RgbSpectrum got = two.query_radiance(p.mean);
        const double w = gaussian_weight(a, p.mean, two.params().radius);
        if (w != gaussian_weight(b, p.mean, two.params().radius)) ++bad;
        // Equal weights w: the field computes (w a + w b) / 2w, the average up to the rounding of w * flux.
        const RgbSpectrum expected = (w * a.flux + w * b.flux) / (w + w);
        const RgbSpectrum average = (a.flux + b.flux) * 0.5;
        if (!(got == expected)) ++bad;
        for (int c = 0; c < 3; ++c) {
            if (std::abs(got[c] - average[c]) > 4 * std::numeric_limits<double>::epsilon() * std::abs(average[c])) ++bad;
        }
    }
    return {bad == 0, "1000 single and 1000 symmetric pairs, " + std::to_string(bad) + " deviations"};
}

// ---------------------------------------------------------------------------
// 8/9/10 drive the command-line tool.

struct Tool {
    std::string exe;
    fs::path dir;

    int run(const std::vector<std::string>& args, const std::string& log_name) const {
        std::string cmd = "\"" + exe + "\"";
        for (const auto& a : args) cmd += " \"" + a + "\"";
        cmd += " > \"" + (dir / log_name).string() + "\" 2>&1";
        return std::system(cmd.c_str());
    }
};

std::string slurp(const fs::path& p) { return fs::exists(p) ? read_text_file(p) : std::string(); }

Outcome cli_determinism(const Tool& tool) {
    const fs::path d = tool.dir / "determinism";
    fs::create_directories(d);
    const std::string scene = "builtin:cornell-box";
    json views = json::array();
    for (double x : {0.0, 0.7}) {
        views.push_back({{"position", {x, 0.1, 3.6}}, {"look_at", {0, 0, 0}}, {"fov", 40}, {"resolution", {16, 16}}});
    }
    write_text_file(d / "views.json", views.dump());
    auto p = [&](const std::string& f) { return (d / f).string(); };

    // Each command: argument list with a {tag} placeholder for output names.
    struct Cmd {
        std::string name;
        std::function<std::vector<std::string>(const std::string&)> args;
        std::vector<std::string> outputs;  // file suffixes compared byte-for-byte
        bool json_metrics = false;
    };
    const std::vector<Cmd> cmds = {
        {"render-pt",
         [&](const std::string& t) {
             return std::vector<std::string>{"render-pt", "--scene", scene, "--resolution", "24x24", "--spp", "8",
                                             "--seed", "3", "--out", p("pt_" + t + ".pfm")};
         },
         {"pt_%.pfm"}},
        {"render-sppm",
         [&](const std::string& t) {
             return std::vector<std::string>{"render-sppm", "--scene", "builtin:caustic-sphere", "--resolution", "24x24",
                                             "--iterations", "3", "--photons", "5000", "--seed", "3", "--out",
                                             p("sppm_" + t + ".pfm")};
         },
         {"sppm_%.pfm"}},
        {"gpf-init",
         [&](const std::string& t) {
             return std::vector<std::string>{"gpf-init", "--scene", scene, "--photons", "5000", "--gaussians", "1000",
                                             "--seed", "3", "--out-checkpoint", p("init_" + t + ".gpf")};
         },
         {"init_%.gpf"}},
        {"gpf-train",
         [&](const std::string& t) {
             return std::vector<std::string>{"gpf-train", "--scene", scene, "--views", p("views.json"),
                                             "--sppm-iterations", "2", "--photons", "5000", "--steps", "30", "--batch",
                                             "64", "--rebuild-every", "10", "--seed", "3", "--in-checkpoint",
                                             p("init_a.gpf"), "--out-checkpoint", p("train_" + t + ".gpf")};
         },
         {"train_%.gpf"}},
        {"gpf-render",
         [&](const std::string& t) {
             return std::vector<std::string>{"gpf-render", "--scene", scene, "--resolution", "24x24", "--checkpoint",
                                             p("train_a.gpf"), "--spp", "2", "--seed", "3", "--out",
                                             p("gpf_" + t + ".pfm")};
         },
         {"gpf_%.pfm"}},
        {"compare",
         [&](const std::string& t) {
             return std::vector<std::string>{"compare", "--ref", p("pt_a.pfm"), "--test", p("gpf_a.pfm"), "--out",
                                             p("compare_" + t + ".json")};
         },
         {"compare_%.json"},
         true},
        {"sweep",
         [&](const std::string& t) {
             return std::vector<std::string>{"sweep", "--scene", scene, "--resolution", "16x16", "--param", "k",
                                             "--values", "1,4", "--views", p("views.json"), "--sppm-iterations", "2",
                                             "--ref-iterations", "2", "--photons", "3000", "--gaussians", "300",
                                             "--steps", "5", "--batch", "32", "--render-spp", "1", "--out",
                                             p("sweep_" + t + ".json"), "--out-dir", p("sweep_" + t)};
         },
         {"sweep_%.json"},
         true},
        {"rerun",
         [&](const std::string& t) {
             return std::vector<std::string>{"rerun", "--manifest", p("pt_a.pfm.manifest.json"), "--out-dir",
                                             p("rerun_" + t)};
         },
         {"rerun_%/pt_a.pfm"}},
    };

    auto strip_timing = [](const std::string& text) {
        json j = json::parse(text);
        for (auto& row : j["rows"]) {
            row.erase("time_seconds");
            row.erase("train_seconds");
        }
        return j.dump();
    };

    std::vector<std::string> failed;
    // Runs a (threads 1), b (threads 4), c (threads 4 again).
    const std::vector<std::pair<std::string, std::string>> runs = {{"a", "1"}, {"b", "4"}, {"c", "4"}};
    for (const Cmd& c : cmds) {
        bool ok = true;
        for (const auto& [tag, threads] : runs) {
            std::vector<std::string> args{"--threads", threads};
            const auto rest = c.args(tag);
            args.insert(args.end(), rest.begin(), rest.end());
            ok = ok && tool.run(args, c.name + "_" + tag + ".log") == 0;
        }
        for (const std::string& pattern : c.outputs) {
            auto name = [&](const std::string& tag) {
                std::string s = pattern;
                s.replace(s.find('%'), 1, tag);
                return d / s;
            };
            const std::string a = slurp(name("a")), b = slurp(name("b")), cc = slurp(name("c"));
            if (a.empty()) {
                ok = false;
            } else if (c.json_metrics) {
                ok = ok && strip_timing(a) == strip_timing(b) && strip_timing(a) == strip_timing(cc);
            } else {
                ok = ok && a == b && a == cc;
            }
        }
        if (c.name == "rerun") ok = ok && slurp(d / "rerun_a/pt_a.pfm") == slurp(d / "pt_a.pfm");
        if (!ok) failed.push_back(c.name);
    }
    std::string detail = std::to_string(cmds.size()) + " commands x 3 runs (threads 1/4/4)";
    if (!failed.empty()) {
        detail += "; differing:";
        for (const auto& f : failed) detail += " " + f;
    }
    return {failed.empty(), detail};
}

Outcome serialization(const Tool& tool) {
    Rng rng(9);
    std::vector<GaussianPrimitive> prims(500);
    for (auto& p : prims) {
        p.mean = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
        p.rotation = sample_uniform_quaternion(rng).value();
        p.scale = {1e-4 + rng.uniform(), 1e-4 + rng.uniform(), 1e-4 + rng.uniform()};
        p.flux = {rng.uniform() - 0.2, rng.uniform() * 100, rng.uniform() * 1e-6};
    }
    const auto once = decode_checkpoint(encode_checkpoint(prims), "memory");
    const auto bytes = encode_checkpoint(once);
    bool ok = decode_checkpoint(bytes, "memory") == once && encode_checkpoint(decode_checkpoint(bytes, "memory")) == bytes;
    for (std::size_t i = 0; i < prims.size(); ++i) {
        ok = ok && once[i].mean.x == static_cast<double>(static_cast<float>(prims[i].mean.x)) &&
             once[i].flux.g == static_cast<double>(static_cast<float>(prims[i].flux.g));
    }

    std::vector<TrainingSample> samples(300);
    for (auto& s : samples) {
        s.position = {rng.uniform(), rng.uniform(), rng.uniform()};
        s.wo = UnitVec3(Vec3{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5});
        s.reference = {rng.uniform(), rng.uniform(), rng.uniform()};
    }
    const auto ds_once = decode_dataset(encode_dataset(samples), "memory");
    const auto ds_bytes = encode_dataset(ds_once);
    ok = ok && decode_dataset(ds_bytes, "memory") == ds_once;

    // A trained checkpoint from the tool renders identically after reload.
    const fs::path d = tool.dir / "determinism";
    bool reload_ok = false;
    if (fs::exists(d / "train_a.gpf") && fs::exists(d / "gpf_a.pfm")) {
        const Scene scene = builtin_scene("cornell-box");
        Camera cam = scene.camera();
        cam.width = cam.height = 24;
        const GpfField field = load_checkpoint(d / "train_a.gpf");
        GpfRenderConfig rc;
        rc.samples_per_pixel = 2;
        rc.seed = 3;
        reload_ok = encode_pfm(render_gpf(scene, cam, field, rc)) == read_text_file(d / "gpf_a.pfm");
        const fs::path resaved = d / "train_a_resaved.gpf";
        save_checkpoint(resaved, field);
        reload_ok = reload_ok && read_text_file(resaved) == read_text_file(d / "train_a.gpf");
    }
    return {ok && reload_ok, std::string("GPF1/GPD1 round trips ") + (ok ? "bit-exact" : "DIFFER") +
                                 ", gpf-train checkpoint reload render " + (reload_ok ? "identical" : "DIFFERS")};
}

Outcome speed_ordering(const Tool& tool, const fs::path& checkpoint, const fs::path& camera) {
    if (!fs::exists(checkpoint)) return {false, "no trained checkpoint (caustic ordering did not run)"};
    const std::vector<std::string> common = {"--scene", "builtin:caustic-sphere", "--camera", camera.string()};
    std::vector<std::string> gpf_args = {"gpf-render"};
    gpf_args.insert(gpf_args.end(), common.begin(), common.end());
    gpf_args.insert(gpf_args.end(), {"--checkpoint", checkpoint.string(), "--out", (tool.dir / "speed_gpf.pfm").string()});
    std::vector<std::string> sppm_args = {"render-sppm"};
    sppm_args.insert(sppm_args.end(), common.begin(), common.end());
    sppm_args.insert(sppm_args.end(), {"--iterations", "256", "--photons", "100000", "--seed", "99", "--out",
                                       (tool.dir / "speed_sppm.pfm").string()});

    auto t0 = Clock::now();
    const int a = tool.run(gpf_args, "speed_gpf.log");
    const double gpf_s = seconds_since(t0);
    t0 = Clock::now();
    const int b = tool.run(sppm_args, "speed_sppm.log");
    const double sppm_s = seconds_since(t0);
    const double ratio = sppm_s / gpf_s;
    return {a == 0 && b == 0 && ratio >= 10.0, "gpf-render " + fmt(gpf_s, 3) + " s vs render-sppm T=256 " +
                                                   fmt(sppm_s, 3) + " s (" + fmt(ratio, 3) + "x)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("acceptance checks");
    std::string gpf_exe, work = "acceptance_work";
    std::vector<int> only;
    app.add_option("--gpf", gpf_exe, "path to the gpf executable")->required();
    app.add_option("--work-dir", work, "scratch directory");
    app.add_option("--only", only, "run a subset of criteria");
    CLI11_PARSE(app, argc, argv);

    const fs::path dir = fs::absolute(work);
    fs::create_directories(dir);
    const Tool tool{gpf_exe, dir};
    const fs::path checkpoint = dir / "caustic_sphere.gpf";
    const fs::path camera = dir / "held_out_camera.json";

    struct Criterion {
        int id;
        std::string name;
        double limit_seconds;  // 0: none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient oracle", 10, gradient_oracle},
        {2, "spatial oracle", 5, spatial_oracle},
        {3, "radius schedule", 0, radius_schedule},
        {4, "physical agreement (SPPM vs PT)", 600, physical_agreement},
        {5, "caustic ordering (GPF vs SPPM-3, held-out view)", 1800,
         [&] { return caustic_ordering(dir, checkpoint, camera); }},
        {6, "training progress", 0, training_progress},
        {7, "trivial-field exactness", 0, trivial_fields},
        {8, "CLI determinism", 0, [&] { return cli_determinism(tool); }},
        {9, "serialization", 0, [&] { return serialization(tool); }},
        {10, "speed ordering (gpf-render vs render-sppm T=256)", 0,
         [&] { return speed_ordering(tool, checkpoint, camera); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = seconds_since(start);
        if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
            o.pass = false;
            o.detail += "; exceeded " + fmt(c.limit_seconds) + " s";
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                    seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
