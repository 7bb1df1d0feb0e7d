// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "gpf/cli/cli.hpp"
#include "gpf/cli/manifest.hpp"
#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"
#include "gpf/field/checkpoint.hpp"
#include "gpf/integrators/path_tracer.hpp"
#include "gpf/integrators/sppm.hpp"
#include "gpf/io/metrics.hpp"
#include "gpf/scene/scene_io.hpp"

namespace gpf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Option roles used by the manifest and by `rerun`.
const std::set<std::string> kEmbeddedInputs = {"views", "camera"};
const std::set<std::string> kHashedInputs = {"checkpoint", "in-checkpoint", "dataset", "ref", "test"};
const std::set<std::string> kOutputs = {"out", "out-checkpoint", "log", "ppm", "photon-dump", "dataset-out", "out-dir"};

struct RunResult {
    std::optional<fs::path> anchor;  // the manifest goes next to this output
    std::vector<fs::path> outputs;
    double time_seconds = 0.0;
    std::uint64_t storage_bytes = 0;
    json extra = json::object();
};

struct SceneOptions {
    std::string source;
    std::string camera_file;
    std::string resolution;
};

void add_scene_options(CLI::App* app, SceneOptions& s, bool with_camera = true) {
    app->add_option("--scene", s.source, "builtin:<name> or a scene JSON file")->required();
    if (with_camera) {
        app->add_option("--camera", s.camera_file, "camera JSON file overriding the scene camera");
        app->add_option("--resolution", s.resolution, "WxH override");
    }
}

Camera apply_overrides(Camera cam, const SceneOptions& s) {
    if (!s.camera_file.empty()) {
        const std::string text = read_text_file(s.camera_file);
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(s.camera_file + ": malformed JSON: " + e.what());
        }
        cam = camera_from_json(j, s.camera_file);
    }
    if (!s.resolution.empty()) {
        int w = 0, h = 0;
        char x = 0, extra = 0;
        std::istringstream in(s.resolution);
        if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || (in >> extra)) {
            throw ParseError("--resolution: expected WxH, got '" + s.resolution + "'");
        }
        cam.width = w;
        cam.height = h;
    }
    cam.validate();
    return cam;
}

std::vector<Camera> read_views(const std::string& path) {
    std::vector<Camera> views = load_cameras(path);
    if (views.empty()) throw ValidationError(path + ": camera list is empty");
    return views;
}

void write_image_outputs(const RadianceImage& img, const std::string& out, const std::string& ppm, double exposure,
                         RunResult& r) {
    write_pfm(out, img);
    r.outputs.emplace_back(out);
    r.anchor = out;
    if (!ppm.empty()) {
        write_ppm(ppm, tone_map(img, exposure));
        r.outputs.emplace_back(ppm);
    }
}

std::uint64_t file_size(const fs::path& p) { return static_cast<std::uint64_t>(fs::file_size(p)); }

/// Bytes of one pass's photon dump: "GPP1", u32 count, 9 f32 per photon.
std::uint64_t photon_dump_bytes(std::size_t count) { return 8 + 36 * static_cast<std::uint64_t>(count); }

void write_photon_dump(const fs::path& path, const std::vector<Photon>& photons) {
    std::vector<TrainingSample> rows;
    rows.reserve(photons.size());
    for (const Photon& p : photons) rows.push_back({p.position, p.incident, p.flux});
    std::vector<unsigned char> bytes = encode_dataset(rows);
    std::copy_n("GPP1", 4, bytes.begin());
    write_text_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// One parsed option as manifest JSON: bool for flags, array for multi-value
/// options, string otherwise. Returns null when the option has no value.
json option_value(const CLI::Option* opt) {
    if (opt->get_type_size() == 0) return opt->count() > 0;
    const std::vector<std::string> values =
        opt->count() > 0 ? opt->results() : std::vector<std::string>{opt->get_default_str()};
    if (opt->get_expected_max() > 1) return opt->count() > 0 ? json(values) : json();
    if (values.empty() || values.front().empty()) return nullptr;
    return values.front();
}

class Cli {
public:
    Cli() : app_("gpf", "Path tracing, SPPM and Gaussian photon field renderer") {
        app_.option_defaults()->always_capture_default();
        app_.add_option("--threads", threads_, "worker threads (0: all cores); results do not depend on it");
        app_.require_subcommand(1);
        add_render_pt();
        add_render_sppm();
        add_gpf_init();
        add_gpf_train();
        add_gpf_render();
        add_compare();
        add_sweep();
        add_rerun();
    }

    int run(const std::vector<std::string>& args) {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app_.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            return app_.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app_.exit(e);
        } catch (const CLI::ParseError& e) {
            std::cerr << "error[parse]: " << e.what() << "\n";
            return kExitParse;
        }
        set_thread_count(threads_);

        CLI::App* sub = app_.get_subcommands().front();
        RunResult result = runners_.at(sub->get_name())();
        if (result.anchor) write_manifest(sub, result);
        return kExitOk;
    }

private:
    CLI::App* add_command(const std::string& name, const std::string& help, std::function<RunResult()> body) {
        CLI::App* sub = app_.add_subcommand(name, help);
        runners_[name] = std::move(body);
        return sub;
    }

    void add_render_pt() {
        auto o = std::make_shared<RenderPtOptions>();
        CLI::App* c = add_command("render-pt", "path-traced reference image", [this, o] { return render_pt_cmd(*o); });
        add_scene_options(c, o->scene);
        c->add_option("--spp", o->pt.samples_per_pixel, "samples per pixel");
        c->add_option("--max-depth", o->pt.max_depth, "scattering events per path");
        c->add_option("--seed", o->pt.seed);
        c->add_option("--out", o->out, "output PFM")->required();
        c->add_option("--ppm", o->ppm, "tone-mapped PPM preview");
        c->add_option("--exposure", o->exposure);
    }

    void add_render_sppm() {
        auto o = std::make_shared<RenderSppmOptions>();
        CLI::App* c = add_command("render-sppm", "stochastic progressive photon mapping",
                                  [this, o] { return render_sppm_cmd(*o); });
        add_scene_options(c, o->scene);
        add_sppm_options(c, o->sppm, "--iterations");
        c->add_option("--out", o->out, "output PFM")->required();
        c->add_option("--ppm", o->ppm, "tone-mapped PPM preview");
        c->add_option("--exposure", o->exposure);
        c->add_option("--photon-dump", o->photon_dump, "write the first pass's photons (GPP1)");
    }

    static void add_sppm_options(CLI::App* c, SppmConfig& s, const std::string& iterations_flag) {
        c->add_option(iterations_flag, s.iterations, "SPPM passes");
        c->add_option("--photons", s.photons_per_iteration, "photons emitted per pass");
        c->add_option("--r0", s.initial_radius, "initial gather radius");
        c->add_option("--alpha", s.alpha, "radius reduction");
        c->add_option("--max-bounces", s.max_photon_bounces, "photon path length cap");
        c->add_option("--seed", s.seed);
    }

    void add_gpf_init() {
        auto o = std::make_shared<GpfInitOptions>();
        CLI::App* c = add_command("gpf-init", "seed a field from one photon pass", [this, o] { return gpf_init_cmd(*o); });
        add_scene_options(c, o->scene, false);
        c->add_option("--photons", o->photons, "photons emitted");
        c->add_option("--max-bounces", o->max_bounces);
        c->add_option("--scale0", o->scale0, "initial isotropic scale");
        c->add_option("--gaussians", o->gaussians, "cap on primitive count (0: one per stored photon)");
        c->add_option("--seed", o->seed);
        c->add_option("--out-checkpoint", o->out, "GPF1 output")->required();
    }

    void add_gpf_train() {
        auto o = std::make_shared<GpfTrainOptions>();
        CLI::App* c = add_command("gpf-train", "fit a field to SPPM radiance", [this, o] { return gpf_train_cmd(*o); });
        add_scene_options(c, o->scene, false);
        c->add_option("--views", o->views, "camera list JSON");
        c->add_option("--dataset", o->dataset_in, "precomputed GPD1 dataset instead of --views supervision");
        c->add_option("--sppm-iterations", o->dataset.sppm.iterations, "SPPM passes for the reference");
        c->add_option("--photons", o->dataset.sppm.photons_per_iteration, "photons per reference pass");
        c->add_option("--r0", o->dataset.sppm.initial_radius);
        c->add_option("--alpha", o->dataset.sppm.alpha);
        c->add_option("--dataset-spp", o->dataset.samples_per_pixel, "supervision samples per pixel");
        c->add_option("--steps", o->train.steps);
        c->add_option("--lr", o->train.learning_rate);
        c->add_option("--batch", o->train.batch_size, "minibatch size (0: full batch)");
        c->add_option("--rebuild-every", o->train.rebuild_every, "index rebuild cadence in steps");
        add_field_options(c, o->field);
        c->add_option("--seed", o->seed);
        c->add_option("--in-checkpoint", o->in, "initial GPF1 field")->required();
        c->add_option("--out-checkpoint", o->out, "trained GPF1 field")->required();
        c->add_option("--log", o->log, "per-step loss CSV");
        c->add_option("--dataset-out", o->dataset_out, "write the supervision set (GPD1)");
    }

    static void add_field_options(CLI::App* c, FieldParams& f) {
        c->add_option("--radius", f.radius, "ball-query radius");
        c->add_option("--kmin", f.k_min, "minimum neighborhood size");
        c->add_option("--epsilon", f.epsilon, "normalizer floor");
    }

    void add_gpf_render() {
        auto o = std::make_shared<GpfRenderOptions>();
        CLI::App* c = add_command("gpf-render", "render through a trained field", [this, o] { return gpf_render_cmd(*o); });
        add_scene_options(c, o->scene);
        c->add_option("--checkpoint", o->checkpoint, "GPF1 field")->required();
        add_field_options(c, o->field);
        c->add_option("--spp", o->render.samples_per_pixel);
        c->add_option("--seed", o->render.seed);
        c->add_flag("--bsdf-modulation", o->render.bsdf_modulation, "multiply field values by the albedo");
        c->add_option("--out", o->out, "output PFM")->required();
        c->add_option("--ppm", o->ppm);
        c->add_option("--exposure", o->exposure);
    }

    void add_compare() {
        auto o = std::make_shared<CompareOptions>();
        CLI::App* c = add_command("compare", "PSNR/SSIM against a reference", [this, o] { return compare_cmd(*o); });
        c->add_option("--ref", o->ref, "reference PFM")->required();
        c->add_option("--test", o->tests, "test PFMs")->required();
        c->add_option("--exposure", o->exposure, "shared exposure for all images");
        c->add_option("--out", o->out, "JSON table (default: stdout)");
    }

    void add_sweep() {
        auto o = std::make_shared<SweepOptions>();
        CLI::App* c = add_command("sweep", "ablation over primitive count or k_min", [this, o] { return sweep_cmd(*o); });
        add_scene_options(c, o->scene);
        c->add_option("--param", o->param)->required()->check(CLI::IsMember({"gaussians", "k"}));
        c->add_option("--values", o->values)->required()->delimiter(',');
        c->add_option("--views", o->views, "training camera list JSON")->required();
        c->add_option("--sppm-iterations", o->dataset.sppm.iterations, "SPPM passes for supervision");
        c->add_option("--ref-iterations", o->ref_iterations, "SPPM passes for the evaluation reference");
        c->add_option("--photons", o->dataset.sppm.photons_per_iteration);
        c->add_option("--gaussians", o->gaussians, "primitive count when sweeping k");
        c->add_option("--scale0", o->scale0);
        c->add_option("--steps", o->train.steps);
        c->add_option("--lr", o->train.learning_rate);
        c->add_option("--batch", o->train.batch_size);
        c->add_option("--rebuild-every", o->train.rebuild_every);
        add_field_options(c, o->field);
        c->add_option("--render-spp", o->render_spp);
        c->add_option("--exposure", o->exposure);
        c->add_option("--seed", o->seed);
        c->add_option("--out", o->out, "JSON table")->required();
        c->add_option("--out-dir", o->out_dir, "directory for per-value renders");
    }

    void add_rerun() {
        auto o = std::make_shared<RerunOptions>();
        CLI::App* c = add_command("rerun", "re-execute a run from its manifest", [this, o] { return rerun_cmd(*o); });
        c->add_option("--manifest", o->manifest)->required();
        c->add_option("--out-dir", o->out_dir)->required();
    }

    // ---- option bundles ----

    struct RenderPtOptions {
        SceneOptions scene;
        PathTracerConfig pt;
        std::string out, ppm;
        double exposure = 1.0;
    };
    struct RenderSppmOptions {
        SceneOptions scene;
        SppmConfig sppm;
        std::string out, ppm, photon_dump;
        double exposure = 1.0;
    };
    struct GpfInitOptions {
        SceneOptions scene;
        std::uint64_t photons = 100000;
        int max_bounces = 16;
        double scale0 = 0.01;
        std::size_t gaussians = 0;
        std::uint64_t seed = 0;
        std::string out;
    };
    struct GpfTrainOptions {
        SceneOptions scene;
        std::string views, dataset_in, in, out, log, dataset_out;
        DatasetConfig dataset;
        TrainConfig train;
        FieldParams field;
        std::uint64_t seed = 0;
    };
    struct GpfRenderOptions {
        SceneOptions scene;
        std::string checkpoint, out, ppm;
        FieldParams field;
        GpfRenderConfig render;
        double exposure = 1.0;
    };
    struct CompareOptions {
        std::string ref, out;
        std::vector<std::string> tests;
        double exposure = 1.0;
    };
    struct SweepOptions {
        SceneOptions scene;
        std::string param, views, out, out_dir;
        std::vector<double> values;
        DatasetConfig dataset;
        TrainConfig train;
        FieldParams field;
        int ref_iterations = 256;
        std::size_t gaussians = 10000;
        double scale0 = 0.01;
        int render_spp = 4;
        double exposure = 1.0;
        std::uint64_t seed = 0;
    };
    struct RerunOptions {
        std::string manifest, out_dir;
    };

    // ---- commands ----

    RunResult render_pt_cmd(const RenderPtOptions& o) {
        const Scene scene = load_base_scene(o.scene.source);
        const Camera cam = apply_overrides(scene.camera(), o.scene);
        RunResult r;
        const auto start = Clock::now();
        const RadianceImage img = render_pt(scene, cam, o.pt);
        r.time_seconds = seconds_since(start);
        write_image_outputs(img, o.out, o.ppm, o.exposure, r);
        report("render-pt", o.out, r.time_seconds);
        return r;
    }

    RunResult render_sppm_cmd(const RenderSppmOptions& o) {
        o.sppm.validate();
        const Scene scene = load_base_scene(o.scene.source);
        const Camera cam = apply_overrides(scene.camera(), o.scene);
        RunResult r;
        const auto start = Clock::now();
        const RadianceImage img = render_sppm(scene, cam, o.sppm);
        r.time_seconds = seconds_since(start);
        write_image_outputs(img, o.out, o.ppm, o.exposure, r);

        const PhotonMap first = sppm_photon_map(scene, o.sppm, 0);
        r.storage_bytes = photon_dump_bytes(first.size());
        if (!o.photon_dump.empty()) {
            write_photon_dump(o.photon_dump, first.photons());
            r.outputs.emplace_back(o.photon_dump);
        }
        report("render-sppm", o.out, r.time_seconds);
        return r;
    }

    RunResult gpf_init_cmd(const GpfInitOptions& o) {
        const Scene scene = load_base_scene(o.scene.source);
        SppmConfig sc;
        sc.photons_per_iteration = o.photons;
        sc.max_photon_bounces = o.max_bounces;
        sc.seed = o.seed;
        sc.validate();
        RunResult r;
        const auto start = Clock::now();
        const PhotonMap map = sppm_photon_map(scene, sc, 0);
        const GpfField field = init_from_photons(map.photons(), o.scale0, o.seed, {}, o.gaussians);
        r.time_seconds = seconds_since(start);
        save_checkpoint(o.out, field);
        r.outputs.emplace_back(o.out);
        r.anchor = o.out;
        r.storage_bytes = file_size(o.out);
        r.extra["primitives"] = field.size();
        std::cout << "gpf-init: " << field.size() << " primitives -> " << o.out << "\n";
        return r;
    }

    RunResult gpf_train_cmd(GpfTrainOptions o) {
        const Scene scene = load_base_scene(o.scene.source);
        o.dataset.seed = o.seed;
        o.dataset.sppm.seed = o.seed;
        o.train.seed = o.seed;
        o.train.validate();
        RunResult r;
        std::vector<TrainingSample> dataset;
        const auto start = Clock::now();
        if (!o.dataset_in.empty()) {
            dataset = load_dataset(o.dataset_in);
        } else {
            if (o.views.empty()) throw ValidationError("gpf-train: one of --views or --dataset is required");
            o.dataset.sppm.validate();
            const std::vector<Camera> views = read_views(o.views);
            dataset = build_dataset(scene, views, o.dataset);
        }
        const double dataset_seconds = seconds_since(start);
        if (!o.dataset_out.empty()) {
            save_dataset(o.dataset_out, dataset);
            r.outputs.emplace_back(o.dataset_out);
        }

        GpfField field = load_checkpoint(o.in, o.field);
        const auto train_start = Clock::now();
        const TrainLog log = train(field, dataset, o.train);
        r.time_seconds = seconds_since(train_start);
        save_checkpoint(o.out, field);
        r.outputs.emplace_back(o.out);
        r.anchor = o.out;
        r.storage_bytes = file_size(o.out);
        if (!o.log.empty()) {
            std::ostringstream csv;
            csv.precision(17);
            csv << "step,loss\n";
            for (std::size_t i = 0; i < log.loss.size(); ++i) csv << i << "," << log.loss[i] << "\n";
            write_text_file(o.log, csv.str());
            r.outputs.emplace_back(o.log);
        }
        r.extra["samples"] = dataset.size();
        r.extra["initial_loss"] = log.initial_loss;
        r.extra["final_loss"] = log.final_loss;
        r.extra["dataset_seconds"] = dataset_seconds;
        std::cout << "gpf-train: " << dataset.size() << " samples, loss " << log.initial_loss << " -> "
                  << log.final_loss << " (" << r.time_seconds << " s) -> " << o.out << "\n";
        return r;
    }

    RunResult gpf_render_cmd(const GpfRenderOptions& o) {
        const Scene scene = load_base_scene(o.scene.source);
        const Camera cam = apply_overrides(scene.camera(), o.scene);
        const GpfField field = load_checkpoint(o.checkpoint, o.field);
        RunResult r;
        const auto start = Clock::now();
        const RadianceImage img = render_gpf(scene, cam, field, o.render);
        r.time_seconds = seconds_since(start);
        r.storage_bytes = file_size(o.checkpoint);
        write_image_outputs(img, o.out, o.ppm, o.exposure, r);
        report("gpf-render", o.out, r.time_seconds);
        return r;
    }

    RunResult compare_cmd(const CompareOptions& o) {
        const RadianceImage ref = read_pfm(o.ref);
        json rows = json::array();
        for (const std::string& t : o.tests) {
            const RadianceImage img = read_pfm(t);
            MetricsRecord m;
            m.psnr = psnr(ref, img, o.exposure);
            m.ssim = ssim(ref, img, o.exposure);
            // Time and storage come from the test image's own manifest, if any.
            const fs::path mp = manifest_path_for(t);
            if (fs::exists(mp)) {
                const json man = parse_json_file(mp);
                m.time_seconds = man.value("time_seconds", 0.0);
                m.storage_bytes = man.value("storage_bytes", std::uint64_t{0});
            }
            json row = to_json(m);
            row["test"] = t;
            rows.push_back(row);
        }
        const json table = {{"reference", o.ref}, {"exposure", o.exposure}, {"rows", rows}};
        RunResult r;
        if (o.out.empty()) {
            std::cout << table.dump(2) << "\n";
        } else {
            write_text_file(o.out, table.dump(2) + "\n");
            r.outputs.emplace_back(o.out);
            r.anchor = o.out;
        }
        return r;
    }

    RunResult sweep_cmd(SweepOptions o) {
        const Scene scene = load_base_scene(o.scene.source);
        const Camera eval_cam = apply_overrides(scene.camera(), o.scene);
        const std::vector<Camera> views = read_views(o.views);
        o.dataset.seed = o.seed;
        o.dataset.sppm.seed = o.seed;
        o.train.seed = o.seed;
        o.train.validate();
        o.dataset.sppm.validate();

        const std::vector<TrainingSample> dataset = build_dataset(scene, views, o.dataset);
        SppmConfig ref_cfg = o.dataset.sppm;
        ref_cfg.iterations = o.ref_iterations;
        ref_cfg.seed = o.seed + 1;
        const RadianceImage reference = render_sppm(scene, eval_cam, ref_cfg);
        const PhotonMap map = sppm_photon_map(scene, o.dataset.sppm, 0);
        if (!o.out_dir.empty()) fs::create_directories(o.out_dir);

        RunResult r;
        json rows = json::array();
        for (double value : o.values) {
            FieldParams fp = o.field;
            std::size_t count = o.gaussians;
            if (o.param == "k") {
                if (value < 1 || value != std::floor(value)) throw ValidationError("sweep: k values must be integers >= 1");
                fp.k_min = static_cast<std::size_t>(value);
            } else {
                if (value < 1 || value != std::floor(value)) {
                    throw ValidationError("sweep: gaussians values must be integers >= 1");
                }
                count = static_cast<std::size_t>(value);
            }
            GpfField field = init_from_photons(map.photons(), o.scale0, o.seed, fp, count);
            const auto train_start = Clock::now();
            const TrainLog log = train(field, dataset, o.train);
            const double train_seconds = seconds_since(train_start);

            GpfRenderConfig rc;
            rc.samples_per_pixel = o.render_spp;
            rc.seed = o.seed;
            const auto render_start = Clock::now();
            const RadianceImage img = render_gpf(scene, eval_cam, field, rc);
            MetricsRecord m;
            m.time_seconds = seconds_since(render_start);
            m.psnr = psnr(reference, img, o.exposure);
            m.ssim = ssim(reference, img, o.exposure);
            m.storage_bytes = encode_checkpoint(field.primitives()).size();

            json row = to_json(m);
            row["param"] = o.param;
            row["value"] = value;
            row["primitives"] = field.size();
            row["train_seconds"] = train_seconds;
            row["final_loss"] = log.final_loss;
            rows.push_back(row);
            if (!o.out_dir.empty()) {
                std::ostringstream name;
                name << o.param << "_" << value << ".pfm";
                write_pfm(fs::path(o.out_dir) / name.str(), img);
                r.outputs.push_back(fs::path(o.out_dir) / name.str());
            }
            std::cout << "sweep " << o.param << "=" << value << ": psnr " << m.psnr << " ssim " << m.ssim << "\n";
        }
        write_text_file(o.out, json({{"param", o.param}, {"rows", rows}}).dump(2) + "\n");
        r.outputs.emplace_back(o.out);
        r.anchor = o.out;
        return r;
    }

    RunResult rerun_cmd(const RerunOptions& o) {
        const json man = parse_json_file(o.manifest);
        const fs::path dir = o.out_dir;
        fs::create_directories(dir);
        std::vector<std::string> args = {"--threads", std::to_string(threads_), man.at("command").get<std::string>()};

        for (const auto& [name, value] : man.at("options").items()) {
            if (value.is_null()) continue;
            if (value.is_boolean()) {
                if (value.get<bool>()) args.push_back("--" + name);
                continue;
            }
            if (name == "scene") {
                const std::string text = man.at("scene").at("json").dump(2) + "\n";
                const fs::path p = dir / "scene.json";
                write_text_file(p, text);
                if (git_blob_sha1(canonical_scene_text(load_scene(p.string()))) !=
                    man.at("scene").at("sha1").get<std::string>()) {
                    throw RuntimeError(o.manifest + ": embedded scene does not match its hash");
                }
                args.insert(args.end(), {"--scene", p.string()});
            } else if (kEmbeddedInputs.count(name)) {
                const fs::path p = dir / (name + ".json");
                write_text_file(p, man.at("embedded").at(name).get<std::string>());
                args.insert(args.end(), {"--" + name, p.string()});
            } else if (kHashedInputs.count(name)) {
                args.push_back("--" + name);
                for (const json& rec : man.at("inputs").at(name)) {
                    const std::string path = rec.at("path").get<std::string>();
                    if (describe_file(path).at("sha1") != rec.at("sha1")) {
                        throw RuntimeError(path + ": input changed since the manifest was written");
                    }
                    args.push_back(path);
                }
            } else if (kOutputs.count(name)) {
                args.insert(args.end(), {"--" + name, (dir / fs::path(value.get<std::string>()).filename()).string()});
            } else if (value.is_array()) {
                args.push_back("--" + name);
                for (const json& v : value) args.push_back(v.get<std::string>());
            } else {
                args.insert(args.end(), {"--" + name, value.get<std::string>()});
            }
        }
        const int code = Cli().run(args);
        if (code != kExitOk) throw RuntimeError("rerun of " + o.manifest + " failed with exit code " + std::to_string(code));
        return {};
    }

    // ---- helpers ----

    Scene load_base_scene(const std::string& source) {
        Scene scene = resolve_scene(source);
        scene_source_ = source;
        scene_json_ = scene_to_json(scene);
        scene_hash_ = git_blob_sha1(canonical_scene_text(scene));
        return scene;
    }

    static json parse_json_file(const fs::path& p) {
        const std::string text = read_text_file(p);
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(p.string() + ": malformed JSON: " + e.what());
        }
    }

    static void report(const std::string& cmd, const std::string& out, double seconds) {
        std::cout << cmd << ": " << out << " (" << seconds << " s)\n";
    }

    void write_manifest(CLI::App* sub, const RunResult& r) {
        json options = json::object();
        json embedded = json::object();
        json inputs = json::object();
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
            const std::string name = opt->get_lnames().front();
            const json value = option_value(opt);
            options[name] = value;
            if (value.is_null() || opt->count() == 0) continue;
            if (kEmbeddedInputs.count(name)) embedded[name] = read_text_file(value.get<std::string>());
            if (kHashedInputs.count(name)) {
                inputs[name] = json::array();
                for (const std::string& p : opt->results()) inputs[name].push_back(describe_file(p));
            }
        }
        json man = {
            {"format", "gpf-manifest/1"},
            {"command", sub->get_name()},
            {"options", options},
            {"embedded", embedded},
            {"inputs", inputs},
            {"time_seconds", r.time_seconds},
            {"storage_bytes", r.storage_bytes},
            {"threads", thread_count()},
        };
        if (!scene_source_.empty()) {
            man["scene"] = {{"source", scene_source_}, {"sha1", scene_hash_}, {"json", scene_json_}};
        }
        json outputs = json::array();
        for (const fs::path& p : r.outputs) outputs.push_back(describe_file(p));
        man["outputs"] = outputs;
        for (const auto& [k, v] : r.extra.items()) man["results"][k] = v;
        write_text_file(manifest_path_for(*r.anchor), man.dump(2) + "\n");
    }

    CLI::App app_;
    std::map<std::string, std::function<RunResult()>> runners_;
    int threads_ = 0;
    std::string scene_source_;
    json scene_json_;
    std::string scene_hash_;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return kExitParse;
        case ErrorKind::Validation: return kExitValidation;
        case ErrorKind::Runtime: return kExitRuntime;
    }
    return kExitInternal;
}

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validate";
        case ErrorKind::Runtime: return "runtime";
    }
    return "internal";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return Cli().run(args);
    } catch (const Error& e) {
        std::cerr << "error[" << kind_name(e.kind()) << "]: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error[runtime]: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace gpf
