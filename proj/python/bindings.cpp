// SPDX-License-Identifier: Apache-2.0
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gpf/core/error.hpp"
#include "gpf/core/parallel.hpp"
#include "gpf/field/checkpoint.hpp"
#include "gpf/field/training.hpp"
#include "gpf/integrators/path_tracer.hpp"
#include "gpf/integrators/sppm.hpp"
#include "gpf/io/image_io.hpp"
#include "gpf/io/metrics.hpp"
#include "gpf/scene/scene_io.hpp"

namespace py = pybind11;
using namespace gpf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const RadianceImage& img) {
    Array out({img.height, img.width, 3});
    auto v = out.mutable_unchecked<3>();
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const RgbSpectrum& p = img.at(x, y);
            v(y, x, 0) = p.r;
            v(y, x, 1) = p.g;
            v(y, x, 2) = p.b;
        }
    }
    return out;
}

RadianceImage from_numpy(const Array& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw ValidationError("expected an array of shape (height, width, 3)");
    RadianceImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    auto v = a.unchecked<3>();
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) img.at(x, y) = {v(y, x, 0), v(y, x, 1), v(y, x, 2)};
    }
    return img;
}

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> arr(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Path tracing, SPPM and Gaussian photon field rendering";

    // Runtime failures raise GpfError; malformed or out-of-range input raises ValueError.
    py::register_exception<Error>(m, "GpfError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ValidationError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Camera>(m, "Camera")
        .def(py::init<>())
        .def_property(
            "position", [](const Camera& c) { return arr(c.position); },
            [](Camera& c, const std::array<double, 3>& v) { c.position = vec(v); })
        .def_property(
            "look_at", [](const Camera& c) { return arr(c.look_at); },
            [](Camera& c, const std::array<double, 3>& v) { c.look_at = vec(v); })
        .def_property(
            "up", [](const Camera& c) { return arr(c.up); }, [](Camera& c, const std::array<double, 3>& v) { c.up = vec(v); })
        .def_readwrite("fov_degrees", &Camera::fov_degrees)
        .def_readwrite("width", &Camera::width)
        .def_readwrite("height", &Camera::height)
        .def("validate", &Camera::validate);

    py::class_<Scene>(m, "Scene")
        .def_property_readonly("camera", &Scene::camera)
        .def("to_json", [](const Scene& s) { return scene_to_json(s).dump(2); });

    m.def("load_scene", &resolve_scene, py::arg("source"),
          "Load 'builtin:<name>' or a scene JSON file.");
    m.def("parse_scene", [](const std::string& text) { return parse_scene(text); }, py::arg("text"));
    m.def("builtin_scene_names", &builtin_scene_names);
    m.def("set_threads", &set_thread_count, py::arg("count"), "Worker threads; 0 uses all cores.");

    m.def(
        "render_pt",
        [](const Scene& scene, const Camera& camera, int spp, int max_depth, std::uint64_t seed) {
            RadianceImage img;
            {
                py::gil_scoped_release release;
                img = render_pt(scene, camera, {spp, max_depth, seed});
            }
            return to_numpy(img);
        },
        py::arg("scene"), py::arg("camera"), py::arg("spp") = 64, py::arg("max_depth") = 16, py::arg("seed") = 0);

    m.def(
        "render_sppm",
        [](const Scene& scene, const Camera& camera, int iterations, std::uint64_t photons, double r0, double alpha,
           int max_bounces, std::uint64_t seed) {
            SppmConfig cfg{iterations, photons, r0, alpha, max_bounces, seed};
            RadianceImage img;
            {
                py::gil_scoped_release release;
                img = render_sppm(scene, camera, cfg);
            }
            return to_numpy(img);
        },
        py::arg("scene"), py::arg("camera"), py::arg("iterations") = 16, py::arg("photons") = 100000,
        py::arg("r0") = 0.02, py::arg("alpha") = 0.7, py::arg("max_bounces") = 16, py::arg("seed") = 0);

    py::class_<GpfField>(m, "Field")
        .def_property_readonly("size", &GpfField::size)
        .def("query", [](const GpfField& f, const std::array<double, 3>& x) {
            const RgbSpectrum l = f.query_radiance(vec(x));
            return std::array<double, 3>{l.r, l.g, l.b};
        })
        .def("primitives", [](const GpfField& f) {
            Array out({static_cast<py::ssize_t>(f.size()), py::ssize_t{13}});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < f.size(); ++i) {
                const GaussianPrimitive& p = f.primitives()[i];
                const double row[13] = {p.mean.x,  p.mean.y,  p.mean.z,  p.rotation.w, p.rotation.x,
                                        p.rotation.y, p.rotation.z, p.scale.x, p.scale.y,   p.scale.z,
                                        p.flux.r,  p.flux.g,  p.flux.b};
                for (int k = 0; k < 13; ++k) v(static_cast<py::ssize_t>(i), k) = row[k];
            }
            return out;
        }, "Rows of (mean xyz, rotation wxyz, scale xyz, flux rgb).")
        .def("save", [](const GpfField& f, const std::filesystem::path& p) { save_checkpoint(p, f); });

    m.def(
        "load_checkpoint",
        [](const std::filesystem::path& path, double radius, std::size_t k_min, double epsilon) {
            return load_checkpoint(path, FieldParams{radius, k_min, epsilon});
        },
        py::arg("path"), py::arg("radius") = 0.02, py::arg("k_min") = 3, py::arg("epsilon") = 1e-6);

    m.def(
        "init_field",
        [](const Scene& scene, std::uint64_t photons, double scale0, std::size_t max_primitives, std::uint64_t seed) {
            SppmConfig cfg;
            cfg.photons_per_iteration = photons;
            cfg.seed = seed;
            const PhotonMap map = sppm_photon_map(scene, cfg, 0);
            return init_from_photons(map.photons(), scale0, seed, {}, max_primitives);
        },
        py::arg("scene"), py::arg("photons") = 100000, py::arg("scale0") = 0.01, py::arg("max_primitives") = 0,
        py::arg("seed") = 0);

    m.def(
        "train_field",
        [](GpfField& field, const Scene& scene, const std::vector<Camera>& views, int sppm_iterations,
           std::uint64_t photons, int steps, double lr, std::size_t batch, std::uint64_t seed) {
            DatasetConfig dc;
            dc.sppm.iterations = sppm_iterations;
            dc.sppm.photons_per_iteration = photons;
            dc.sppm.seed = seed;
            dc.seed = seed;
            TrainConfig tc;
            tc.steps = steps;
            tc.learning_rate = lr;
            tc.batch_size = batch;
            tc.seed = seed;
            TrainLog log;
            {
                py::gil_scoped_release release;
                const auto dataset = build_dataset(scene, views, dc);
                log = train(field, dataset, tc);
            }
            return py::dict(py::arg("loss") = log.loss, py::arg("initial_loss") = log.initial_loss,
                            py::arg("final_loss") = log.final_loss);
        },
        py::arg("field"), py::arg("scene"), py::arg("views"), py::arg("sppm_iterations") = 16,
        py::arg("photons") = 100000, py::arg("steps") = 2000, py::arg("lr") = 5e-4, py::arg("batch") = 4096,
        py::arg("seed") = 0);

    m.def(
        "render_gpf",
        [](const Scene& scene, const Camera& camera, const GpfField& field, int spp, std::uint64_t seed,
           bool bsdf_modulation) {
            RadianceImage img;
            {
                py::gil_scoped_release release;
                img = render_gpf(scene, camera, field, {spp, seed, bsdf_modulation});
            }
            return to_numpy(img);
        },
        py::arg("scene"), py::arg("camera"), py::arg("field"), py::arg("spp") = 4, py::arg("seed") = 0,
        py::arg("bsdf_modulation") = false);

    m.def("read_pfm", [](const std::filesystem::path& p) { return to_numpy(read_pfm(p)); });
    m.def("write_pfm", [](const std::filesystem::path& p, const Array& a) { write_pfm(p, from_numpy(a)); });
    m.def(
        "psnr", [](const Array& a, const Array& b, double exposure) { return psnr(from_numpy(a), from_numpy(b), exposure); },
        py::arg("reference"), py::arg("test"), py::arg("exposure") = 1.0);
    m.def(
        "ssim", [](const Array& a, const Array& b, double exposure) { return ssim(from_numpy(a), from_numpy(b), exposure); },
        py::arg("reference"), py::arg("test"), py::arg("exposure") = 1.0);
}
