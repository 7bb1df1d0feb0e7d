// SPDX-License-Identifier: Apache-2.0
// Procedural desk-scale scenes, all fitted inside [-1, 1]^3.
#include <cmath>

#include "gpf/core/error.hpp"
#include "gpf/scene/scene_io.hpp"

namespace gpf {

namespace {

/// Axis-aligned box of half extents `half`, rotated about +y by `angle`
/// radians and resting on y = `floor_y`.
TriangleMesh make_box(const Point3& center_xz, const Vec3& half, double angle, double floor_y) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto place = [&](double x, double y, double z) {
        return Point3{center_xz.x + c * x + s * z, floor_y + half.y + y, center_xz.z - s * x + c * z};
    };
    TriangleMesh mesh;
    for (int i = 0; i < 8; ++i) {
        mesh.vertices.push_back(place((i & 1) ? half.x : -half.x, (i & 2) ? half.y : -half.y, (i & 4) ? half.z : -half.z));
    }
    // Outward-facing, counter-clockwise faces.
    const std::uint32_t faces[6][4] = {{0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                       {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}};
    for (const auto& f : faces) {
        mesh.indices.push_back({f[0], f[1], f[2]});
        mesh.indices.push_back({f[0], f[2], f[3]});
    }
    return mesh;
}

std::size_t material_index(const std::vector<NamedMaterial>& mats, const std::string& name) {
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].name == name) return i;
    }
    throw ValidationError("builtin scene refers to unknown material " + name);
}

Scene cornell_box() {
    Camera cam;
    cam.position = {0.0, 0.0, 3.9};
    cam.look_at = {0.0, 0.0, 0.0};
    cam.fov_degrees = 39.0;

    std::vector<NamedMaterial> mats = {
        {"white", {Diffuse{{0.75, 0.75, 0.75}}}},
        {"red", {Diffuse{{0.63, 0.065, 0.05}}}},
        {"green", {Diffuse{{0.14, 0.45, 0.091}}}},
        {"light", {Diffuse{{0.0, 0.0, 0.0}}}},
    };
    const std::size_t white = material_index(mats, "white");
    std::vector<Shape> shapes;
    // Floor, ceiling, back, left, right.
    shapes.push_back({Quad{{-1, -1, -1}, {0, 0, 2}, {2, 0, 0}}, white, {}});
    shapes.push_back({Quad{{-1, 1, -1}, {2, 0, 0}, {0, 0, 2}}, white, {}});
    shapes.push_back({Quad{{-1, -1, -1}, {2, 0, 0}, {0, 2, 0}}, white, {}});
    shapes.push_back({Quad{{-1, -1, -1}, {0, 2, 0}, {0, 0, 2}}, material_index(mats, "red"), {}});
    shapes.push_back({Quad{{1, -1, -1}, {0, 0, 2}, {0, 2, 0}}, material_index(mats, "green"), {}});
    // Ceiling light facing down.
    shapes.push_back({Quad{{-0.25, 0.998, -0.25}, {0.5, 0, 0}, {0, 0, 0.5}}, material_index(mats, "light"),
                      RgbSpectrum{17.0, 17.0, 17.0}});
    shapes.push_back({make_box({0.33, 0.0, 0.37}, {0.3, 0.3, 0.3}, -0.30, -1.0), white, {}});
    shapes.push_back({make_box({-0.34, 0.0, -0.3}, {0.3, 0.6, 0.3}, 0.29, -1.0), white, {}});
    return Scene(cam, std::move(mats), std::move(shapes));
}

Scene caustic_sphere() {
    Camera cam;
    cam.position = {0.0, 0.75, 3.0};
    cam.look_at = {0.0, -0.65, 0.0};
    cam.fov_degrees = 40.0;

    std::vector<NamedMaterial> mats = {
        {"floor", {Diffuse{{0.75, 0.75, 0.75}}}},
        {"wall", {Diffuse{{0.65, 0.6, 0.55}}}},
        {"glass", {Dielectric{1.5}}},
        {"light", {Diffuse{{0.0, 0.0, 0.0}}}},
    };
    std::vector<Shape> shapes;
    shapes.push_back({Quad{{-1, -1, -1}, {0, 0, 2}, {2, 0, 0}}, material_index(mats, "floor"), {}});
    shapes.push_back({Quad{{-1, -1, -1}, {2, 0, 0}, {0, 2, 0}}, material_index(mats, "wall"), {}});
    shapes.push_back({Sphere{{0.0, -0.5, 0.0}, 0.35}, material_index(mats, "glass"), {}});
    shapes.push_back({Quad{{0.2, 0.9, 0.05}, {0.3, 0, 0}, {0, 0, 0.3}}, material_index(mats, "light"),
                      RgbSpectrum{60.0, 60.0, 60.0}});
    return Scene(cam, std::move(mats), std::move(shapes));
}

Scene caustic_pool() {
    Camera cam;
    cam.position = {0.0, 0.9, 2.6};
    cam.look_at = {0.0, -0.8, 0.0};
    cam.fov_degrees = 42.0;

    std::vector<NamedMaterial> mats = {
        {"floor", {Diffuse{{0.8, 0.78, 0.7}}}},
        {"tile", {Diffuse{{0.4, 0.6, 0.7}}}},
        {"water", {Dielectric{1.33}}},
        {"light", {Diffuse{{0.0, 0.0, 0.0}}}},
    };
    std::vector<Shape> shapes;
    const std::size_t tile = material_index(mats, "tile");
    shapes.push_back({Quad{{-1, -1, -1}, {0, 0, 2}, {2, 0, 0}}, material_index(mats, "floor"), {}});
    // Pool walls rising just above the water line.
    shapes.push_back({Quad{{-1, -1, -1}, {2, 0, 0}, {0, 0.65, 0}}, tile, {}});
    shapes.push_back({Quad{{-1, -1, 1}, {0, 0.65, 0}, {2, 0, 0}}, tile, {}});
    shapes.push_back({Quad{{-1, -1, -1}, {0, 0.65, 0}, {0, 0, 2}}, tile, {}});
    shapes.push_back({Quad{{1, -1, -1}, {0, 0, 2}, {0, 0.65, 0}}, tile, {}});

    // Rippled water surface over the whole pool, normals up.
    constexpr int kCells = 40;
    TriangleMesh water;
    for (int j = 0; j <= kCells; ++j) {
        for (int i = 0; i <= kCells; ++i) {
            const double x = -1.0 + 2.0 * i / kCells;
            const double z = -1.0 + 2.0 * j / kCells;
            const double h = 0.03 * std::sin(6.0 * x + 1.0) * std::cos(5.0 * z) + 0.015 * std::sin(11.0 * (x + z));
            water.vertices.push_back({x, -0.5 + h, z});
        }
    }
    auto vid = [](int i, int j) { return static_cast<std::uint32_t>(j * (kCells + 1) + i); };
    for (int j = 0; j < kCells; ++j) {
        for (int i = 0; i < kCells; ++i) {
            water.indices.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)});
            water.indices.push_back({vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    }
    shapes.push_back({std::move(water), material_index(mats, "water"), {}});
    shapes.push_back({Quad{{-0.2, 0.9, -0.2}, {0.4, 0, 0}, {0, 0, 0.4}}, material_index(mats, "light"),
                      RgbSpectrum{40.0, 40.0, 40.0}});
    return Scene(cam, std::move(mats), std::move(shapes));
}

}  // namespace

std::vector<std::string> builtin_scene_names() { return {"cornell-box", "caustic-sphere", "caustic-pool"}; }

Scene builtin_scene(const std::string& name) {
    if (name == "cornell-box") return cornell_box();
    if (name == "caustic-sphere") return caustic_sphere();
    if (name == "caustic-pool") return caustic_pool();
    throw ValidationError("unknown builtin scene '" + name + "'");
}

}  // namespace gpf
