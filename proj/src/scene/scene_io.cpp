// SPDX-License-Identifier: Apache-2.0
#include "gpf/scene/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gpf/core/error.hpp"

namespace gpf {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw ParseError(path + "." + key + ": unknown key");
    }
}

const json& field(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + "." + key + ": missing required field");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw ParseError(path + ": expected an array of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = number(j[i], path + "[" + std::to_string(i) + "]");
    if (!is_finite(v)) throw ValidationError(path + ": non-finite component");
    return v;
}

RgbSpectrum rgb(const json& j, const std::string& path) {
    const Vec3 v = vec3(j, path);
    return {v.x, v.y, v.z};
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json to_json(const RgbSpectrum& s) { return json::array({s.r, s.g, s.b}); }

Material material_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    const json& type = field(j, path, "type");
    if (!type.is_string()) throw ParseError(path + ".type: expected a string");
    const std::string t = type.get<std::string>();
    if (t == "diffuse") {
        check_keys(j, path, {"type", "albedo"});
        return {Diffuse{rgb(field(j, path, "albedo"), path + ".albedo")}};
    }
    if (t == "mirror") {
        check_keys(j, path, {"type", "reflectance"});
        return {Mirror{rgb(field(j, path, "reflectance"), path + ".reflectance")}};
    }
    if (t == "dielectric") {
        check_keys(j, path, {"type", "ior"});
        return {Dielectric{number(field(j, path, "ior"), path + ".ior")}};
    }
    throw ParseError(path + ".type: unknown material type '" + t + "'");
}

json material_to_json(const Material& m) {
    if (const auto* d = std::get_if<Diffuse>(&m.kind)) return {{"type", "diffuse"}, {"albedo", to_json(d->albedo)}};
    if (const auto* r = std::get_if<Mirror>(&m.kind)) return {{"type", "mirror"}, {"reflectance", to_json(r->reflectance)}};
    return {{"type", "dielectric"}, {"ior", std::get<Dielectric>(m.kind).ior}};
}

Shape shape_from_json(const json& j, const std::string& path, const std::vector<NamedMaterial>& materials) {
    require_object(j, path);
    const json& type = field(j, path, "type");
    if (!type.is_string()) throw ParseError(path + ".type: expected a string");
    const std::string t = type.get<std::string>();

    Shape shape;
    if (t == "sphere") {
        check_keys(j, path, {"type", "material", "emission", "center", "radius"});
        shape.geometry = Sphere{vec3(field(j, path, "center"), path + ".center"),
                                number(field(j, path, "radius"), path + ".radius")};
    } else if (t == "quad") {
        check_keys(j, path, {"type", "material", "emission", "corner", "edge_u", "edge_v"});
        shape.geometry = Quad{vec3(field(j, path, "corner"), path + ".corner"),
                              vec3(field(j, path, "edge_u"), path + ".edge_u"),
                              vec3(field(j, path, "edge_v"), path + ".edge_v")};
    } else if (t == "mesh") {
        check_keys(j, path, {"type", "material", "emission", "vertices", "indices"});
        TriangleMesh mesh;
        const json& verts = field(j, path, "vertices");
        if (!verts.is_array()) throw ParseError(path + ".vertices: expected an array");
        for (std::size_t i = 0; i < verts.size(); ++i) {
            mesh.vertices.push_back(vec3(verts[i], path + ".vertices[" + std::to_string(i) + "]"));
        }
        const json& idx = field(j, path, "indices");
        if (!idx.is_array()) throw ParseError(path + ".indices: expected an array");
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const std::string p = path + ".indices[" + std::to_string(i) + "]";
            if (!idx[i].is_array() || idx[i].size() != 3) throw ParseError(p + ": expected 3 vertex indices");
            std::array<std::uint32_t, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                if (!idx[i][k].is_number_unsigned()) throw ParseError(p + ": expected non-negative integers");
                tri[k] = idx[i][k].get<std::uint32_t>();
            }
            mesh.indices.push_back(tri);
        }
        shape.geometry = std::move(mesh);
    } else {
        throw ParseError(path + ".type: unknown shape type '" + t + "'");
    }

    const json& mat = field(j, path, "material");
    if (!mat.is_string()) throw ParseError(path + ".material: expected a material name");
    const std::string name = mat.get<std::string>();
    const auto it = std::find_if(materials.begin(), materials.end(),
                                 [&](const NamedMaterial& m) { return m.name == name; });
    if (it == materials.end()) throw ValidationError(path + ".material: unknown material '" + name + "'");
    shape.material = static_cast<std::size_t>(it - materials.begin());
    if (j.contains("emission")) shape.emission = rgb(j["emission"], path + ".emission");
    return shape;
}

json shape_to_json(const Shape& s, const std::vector<NamedMaterial>& materials) {
    json j;
    if (const auto* sp = std::get_if<Sphere>(&s.geometry)) {
        j = {{"type", "sphere"}, {"center", to_json(sp->center)}, {"radius", sp->radius}};
    } else if (const auto* q = std::get_if<Quad>(&s.geometry)) {
        j = {{"type", "quad"}, {"corner", to_json(q->corner)}, {"edge_u", to_json(q->edge_u)}, {"edge_v", to_json(q->edge_v)}};
    } else {
        const auto& mesh = std::get<TriangleMesh>(s.geometry);
        json verts = json::array();
        for (const auto& v : mesh.vertices) verts.push_back(to_json(v));
        json idx = json::array();
        for (const auto& t : mesh.indices) idx.push_back(json::array({t[0], t[1], t[2]}));
        j = {{"type", "mesh"}, {"vertices", std::move(verts)}, {"indices", std::move(idx)}};
    }
    j["material"] = materials[s.material].name;
    if (s.emission) j["emission"] = to_json(*s.emission);
    return j;
}

Scene scene_from_json(const json& j) {
    require_object(j, "scene");
    check_keys(j, "scene", {"camera", "materials", "shapes"});
    Camera camera = camera_from_json(field(j, "scene", "camera"), "camera");

    const json& mats = field(j, "scene", "materials");
    if (!mats.is_object()) throw ParseError("materials: expected an object mapping names to materials");
    std::vector<NamedMaterial> materials;
    for (const auto& [name, value] : mats.items()) {
        materials.push_back({name, material_from_json(value, "materials." + name)});
    }

    const json& shapes_j = field(j, "scene", "shapes");
    if (!shapes_j.is_array()) throw ParseError("shapes: expected an array");
    std::vector<Shape> shapes;
    for (std::size_t i = 0; i < shapes_j.size(); ++i) {
        shapes.push_back(shape_from_json(shapes_j[i], "shapes[" + std::to_string(i) + "]", materials));
    }
    return Scene(std::move(camera), std::move(materials), std::move(shapes));
}

json parse_json_text(std::string_view text, const std::string& source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line/column for the message.
        std::size_t line = 1, column = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Camera camera_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"position", "look_at", "up", "fov", "resolution"});
    Camera c;
    c.position = vec3(field(j, path, "position"), path + ".position");
    c.look_at = vec3(field(j, path, "look_at"), path + ".look_at");
    if (j.contains("up")) c.up = vec3(j["up"], path + ".up");
    c.fov_degrees = number(field(j, path, "fov"), path + ".fov");
    const json& res = field(j, path, "resolution");
    if (!res.is_array() || res.size() != 2 || !res[0].is_number_integer() || !res[1].is_number_integer()) {
        throw ParseError(path + ".resolution: expected [width, height] integers");
    }
    c.width = res[0].get<int>();
    c.height = res[1].get<int>();
    try {
        c.validate();
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        if (path != "camera" && msg.rfind("camera", 0) == 0) msg = path + msg.substr(6);
        throw ValidationError(msg);
    }
    return c;
}

json camera_to_json(const Camera& c) {
    return {{"position", to_json(c.position)},
            {"look_at", to_json(c.look_at)},
            {"up", to_json(c.up)},
            {"fov", c.fov_degrees},
            {"resolution", json::array({c.width, c.height})}};
}

Scene parse_scene(std::string_view text, const std::string& source) {
    return scene_from_json(parse_json_text(text, source));
}

Scene load_scene(const std::string& path) { return parse_scene(read_text_file(path), path); }

json scene_to_json(const Scene& scene) {
    json mats = json::object();
    for (const auto& m : scene.materials()) mats[m.name] = material_to_json(m.material);
    json shapes = json::array();
    for (const auto& s : scene.shapes()) shapes.push_back(shape_to_json(s, scene.materials()));
    return {{"camera", camera_to_json(scene.camera())}, {"materials", std::move(mats)}, {"shapes", std::move(shapes)}};
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError("cannot write file: " + path);
    out << scene_to_json(scene).dump(2) << '\n';
}

std::vector<Camera> load_cameras(const std::string& path) {
    const std::string text = read_text_file(path);
    const json j = parse_json_text(text, path);
    if (!j.is_array()) throw ParseError(path + ": expected a JSON array of cameras");
    std::vector<Camera> cams;
    for (std::size_t i = 0; i < j.size(); ++i) cams.push_back(camera_from_json(j[i], "cameras[" + std::to_string(i) + "]"));
    if (cams.empty()) throw ValidationError(path + ": camera list is empty");
    return cams;
}

Scene resolve_scene(const std::string& source) {
    constexpr std::string_view prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return builtin_scene(source.substr(prefix.size()));
    return load_scene(source);
}

Scene with_camera(const Scene& scene, const Camera& camera) {
    return Scene(camera, scene.materials(), scene.shapes());
}

}  // namespace gpf
