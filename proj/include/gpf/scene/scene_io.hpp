// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gpf/scene/scene.hpp"

namespace gpf {

// Scene JSON layout (unknown keys anywhere are a ParseError):
//
//   {
//     "camera":    {"position": [x,y,z], "look_at": [x,y,z], "up": [x,y,z],
//                   "fov": degrees, "resolution": [width, height]},
//     "materials": {"<name>": {"type": "diffuse",    "albedo": [r,g,b]}
//                           | {"type": "mirror",     "reflectance": [r,g,b]}
//                           | {"type": "dielectric", "ior": n}},
//     "shapes":    [{"type": "sphere", "center": [...], "radius": r, ...}
//                 | {"type": "quad", "corner": [...], "edge_u": [...], "edge_v": [...], ...}
//                 | {"type": "mesh", "vertices": [[...], ...], "indices": [[i,j,k], ...], ...}]
//   }
//
// Every shape names its "material" and may carry "emission": [r,g,b].

Scene parse_scene(std::string_view text, const std::string& source = "<string>");
Scene load_scene(const std::string& path);
nlohmann::json scene_to_json(const Scene& scene);
void save_scene(const Scene& scene, const std::string& path);

Camera camera_from_json(const nlohmann::json& j, const std::string& path = "camera");
nlohmann::json camera_to_json(const Camera& camera);
/// Camera list file: a JSON array of camera objects.
std::vector<Camera> load_cameras(const std::string& path);

/// Names accepted by builtin_scene.
std::vector<std::string> builtin_scene_names();
/// Throws ValidationError for an unknown name.
Scene builtin_scene(const std::string& name);

/// "builtin:<name>" or a path to a scene JSON file.
Scene resolve_scene(const std::string& source);

/// Same scene with a different camera.
Scene with_camera(const Scene& scene, const Camera& camera);

}  // namespace gpf
