// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/scene.hpp"
#include "hd/pfm.hpp"

#include <fstream>
#include <set>

namespace hd::synth {

Vec3 evaluate_track(const std::vector<Keyframe>& keys, int frame, const Vec3& fallback)
{
    if (keys.empty())
        return fallback;
    if (frame <= keys.front().frame)
        return keys.front().value;
    if (frame >= keys.back().frame)
        return keys.back().value;
    for (std::size_t i = 1; i < keys.size(); ++i) {
        const Keyframe& a = keys[i - 1];
        const Keyframe& b = keys[i];
        if (frame <= b.frame) {
            if (frame == b.frame)
                return b.value;
            const float t = static_cast<float>(frame - a.frame) / static_cast<float>(b.frame - a.frame);
            return lerp(a.value, b.value, t);
        }
    }
    return keys.back().value;
}

std::vector<std::string> validate(const SceneDescriptor& s)
{
    std::vector<std::string> errs;
    if (s.objects.empty())
        errs.emplace_back("scene needs at least one object");
    if (s.frame_count < 1)
        errs.emplace_back("frame_count must be >= 1");
    if (s.width < 1 || s.height < 1)
        errs.emplace_back("resolution must be positive");
    if (s.camera.keys.empty())
        errs.emplace_back("camera needs at least one keyframe");
    if (s.light.center_keys.empty())
        errs.emplace_back("light needs at least one keyframe");
    if (!(s.shadow_angle_deg >= 0.f && s.shadow_angle_deg < 180.f))
        errs.emplace_back("shadow_angle_deg must be in [0, 180)");
    if (s.env.file.empty() && (s.env.width < 8 || s.env.height < 4))
        errs.emplace_back("environment map must be at least 8x4");
    if (s.env_levels < 1)
        errs.emplace_back("env_levels must be >= 1");

    std::set<int> ids;
    auto check_id = [&](int id) {
        if (id < 1)
            errs.push_back("object id " + std::to_string(id) + " must be >= 1");
        if (!ids.insert(id).second)
            errs.push_back("duplicate object id " + std::to_string(id));
    };
    for (const auto& o : s.objects) {
        check_id(o.id);
        if (o.shape == Shape::Sphere && !(o.radius > 0.f))
            errs.push_back("sphere " + std::to_string(o.id) + " needs a positive radius");
        if (o.shape == Shape::Box && !(o.half_extent.x > 0.f && o.half_extent.y > 0.f && o.half_extent.z > 0.f))
            errs.push_back("box " + std::to_string(o.id) + " needs positive extents");
    }
    if (s.ground.enabled)
        check_id(s.ground.id);

    auto check_mat = [&](const Material& m, int id) {
        if (m.roughness < 0.f || m.roughness > 1.f)
            errs.push_back("roughness of object " + std::to_string(id) + " outside [0, 1]");
        for (int c = 0; c < 3; ++c)
            if (m.albedo[c] < 0.f || m.albedo[c] > 1.f || m.emissive[c] < 0.f)
                errs.push_back("albedo/emission of object " + std::to_string(id) + " out of range");
        if (m.specular < 0.f)
            errs.push_back("specular of object " + std::to_string(id) + " must be >= 0");
    };
    for (const auto& o : s.objects)
        check_mat(o.material, o.id);
    if (s.ground.enabled)
        check_mat(s.ground.material, s.ground.id);
    return errs;
}

float light_radius(const SceneDescriptor& scene, const Vec3& light_center)
{
    const float half = scene.shadow_angle_deg * kPi / 360.f;
    return length(light_center - scene.reference_point) * std::tan(half);
}

Camera camera_at(const SceneDescriptor& scene, int frame)
{
    const auto& keys = scene.camera.keys;
    std::vector<Keyframe> pos, tgt;
    for (const auto& k : keys) {
        pos.push_back({k.frame, k.position});
        tgt.push_back({k.frame, k.target});
    }
    return Camera::look_at(evaluate_track(pos, frame), evaluate_track(tgt, frame), scene.camera.up,
                           scene.camera.vfov_deg, scene.width, scene.height);
}

LightState light_at(const SceneDescriptor& scene, int frame)
{
    LightState l;
    l.center = evaluate_track(scene.light.center_keys, frame);
    l.radius = light_radius(scene, l.center);
    l.intensity = scene.light.intensity;
    return l;
}

Image make_env_image(const SceneDescriptor& scene)
{
    const EnvDesc& e = scene.env;
    if (!e.file.empty()) {
        Image img = pfm::read(e.file);
        if (img.channels() != 3)
            throw Error("environment map '" + e.file + "' must be RGB");
        return img;
    }
    Image img(e.width, e.height, 3);
    const Vec3 sun = normalize(e.sun_direction);
    const float cos_sun = std::cos(e.sun_size_deg * kPi / 360.f);
    for (int j = 0; j < e.height; ++j)
        for (int i = 0; i < e.width; ++i) {
            const Vec3 d = latlong_direction(i, j, e.width, e.height);
            Vec3 c = d.y >= 0.f ? lerp(e.horizon, e.zenith, std::sqrt(d.y)) : lerp(e.horizon, e.ground, std::sqrt(-d.y));
            if (e.sun_size_deg > 0.f && dot(d, sun) >= cos_sun)
                c += e.sun_color;
            img.set_rgb(i, j, c);
        }
    return img;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json vec(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec(const nlohmann::json& j)
{
    if (j.is_number())
        return Vec3(j.get<float>());
    if (!j.is_array() || j.size() != 3)
        throw Error("expected a 3-vector, got " + j.dump());
    return {j[0].get<float>(), j[1].get<float>(), j[2].get<float>()};
}

nlohmann::json material_json(const Material& m)
{
    return {{"albedo", vec(m.albedo)}, {"roughness", m.roughness}, {"emissive", vec(m.emissive)}, {"specular", m.specular}};
}

Material material_from(const nlohmann::json& j)
{
    Material m;
    if (j.contains("albedo")) m.albedo = vec(j["albedo"]);
    if (j.contains("roughness")) m.roughness = j["roughness"].get<float>();
    if (j.contains("emissive")) m.emissive = vec(j["emissive"]);
    if (j.contains("specular")) m.specular = j["specular"].get<float>();
    return m;
}

nlohmann::json keys_json(const std::vector<Keyframe>& keys, const char* field)
{
    auto arr = nlohmann::json::array();
    for (const auto& k : keys)
        arr.push_back({{"frame", k.frame}, {field, vec(k.value)}});
    return arr;
}

std::vector<Keyframe> keys_from(const nlohmann::json& arr, const char* field)
{
    std::vector<Keyframe> keys;
    for (const auto& k : arr)
        keys.push_back({k.value("frame", 0), vec(k.at(field))});
    std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.frame < b.frame; });
    return keys;
}

} // namespace

nlohmann::json to_json(const SceneDescriptor& s)
{
    nlohmann::json cam_keys = nlohmann::json::array();
    for (const auto& k : s.camera.keys)
        cam_keys.push_back({{"frame", k.frame}, {"position", vec(k.position)}, {"target", vec(k.target)}});

    nlohmann::json objects = nlohmann::json::array();
    for (const auto& o : s.objects) {
        nlohmann::json jo = {{"type", o.shape == Shape::Sphere ? "sphere" : "box"},
                             {"id", o.id},
                             {"center", vec(o.center)},
                             {"material", material_json(o.material)}};
        if (o.shape == Shape::Sphere)
            jo["radius"] = o.radius;
        else
            jo["half_extent"] = vec(o.half_extent);
        if (!o.offset_keys.empty())
            jo["offset_keys"] = keys_json(o.offset_keys, "offset");
        objects.push_back(std::move(jo));
    }

    nlohmann::json env = {{"width", s.env.width},
                          {"height", s.env.height},
                          {"zenith", vec(s.env.zenith)},
                          {"horizon", vec(s.env.horizon)},
                          {"ground", vec(s.env.ground)},
                          {"sun_direction", vec(s.env.sun_direction)},
                          {"sun_color", vec(s.env.sun_color)},
                          {"sun_size_deg", s.env.sun_size_deg}};
    if (!s.env.file.empty())
        env["file"] = s.env.file;

    return {
        {"name", s.name},
        {"frame_count", s.frame_count},
        {"width", s.width},
        {"height", s.height},
        {"camera", {{"keys", cam_keys}, {"up", vec(s.camera.up)}, {"vfov_deg", s.camera.vfov_deg}}},
        {"objects", objects},
        {"ground",
         {{"enabled", s.ground.enabled},
          {"height", s.ground.height},
          {"id", s.ground.id},
          {"material", material_json(s.ground.material)}}},
        {"light", {{"center_keys", keys_json(s.light.center_keys, "center")}, {"intensity", vec(s.light.intensity)}}},
        {"shadow_angle_deg", s.shadow_angle_deg},
        {"reference_point", vec(s.reference_point)},
        {"env", env},
        {"env_levels", s.env_levels},
    };
}

SceneDescriptor scene_from_json(const nlohmann::json& j)
{
    SceneDescriptor s;
    try {
        s.name = j.value("name", s.name);
        s.frame_count = j.value("frame_count", s.frame_count);
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);

        const auto& cam = j.at("camera");
        for (const auto& k : cam.at("keys"))
            s.camera.keys.push_back({k.value("frame", 0), vec(k.at("position")), vec(k.at("target"))});
        std::stable_sort(s.camera.keys.begin(), s.camera.keys.end(),
                         [](const auto& a, const auto& b) { return a.frame < b.frame; });
        if (cam.contains("up")) s.camera.up = vec(cam["up"]);
        s.camera.vfov_deg = cam.value("vfov_deg", s.camera.vfov_deg);

        for (const auto& jo : j.at("objects")) {
            ObjectDesc o;
            const auto type = jo.at("type").get<std::string>();
            if (type == "sphere") {
                o.shape = Shape::Sphere;
                o.radius = jo.at("radius").get<float>();
            } else if (type == "box") {
                o.shape = Shape::Box;
                o.half_extent = vec(jo.at("half_extent"));
            } else {
                throw Error("unknown object type '" + type + "'");
            }
            o.id = jo.at("id").get<int>();
            o.center = vec(jo.at("center"));
            if (jo.contains("material"))
                o.material = material_from(jo["material"]);
            if (jo.contains("offset_keys"))
                o.offset_keys = keys_from(jo["offset_keys"], "offset");
            s.objects.push_back(std::move(o));
        }

        if (j.contains("ground")) {
            const auto& g = j["ground"];
            s.ground.enabled = g.value("enabled", true);
            s.ground.height = g.value("height", 0.f);
            s.ground.id = g.value("id", s.ground.id);
            if (g.contains("material"))
                s.ground.material = material_from(g["material"]);
        } else {
            s.ground.enabled = false;
        }

        const auto& light = j.at("light");
        s.light.center_keys = keys_from(light.at("center_keys"), "center");
        if (light.contains("intensity")) s.light.intensity = vec(light["intensity"]);

        s.shadow_angle_deg = j.value("shadow_angle_deg", s.shadow_angle_deg);
        if (j.contains("reference_point")) s.reference_point = vec(j["reference_point"]);

        if (j.contains("env")) {
            const auto& e = j["env"];
            s.env.file = e.value("file", std::string{});
            s.env.width = e.value("width", s.env.width);
            s.env.height = e.value("height", s.env.height);
            if (e.contains("zenith")) s.env.zenith = vec(e["zenith"]);
            if (e.contains("horizon")) s.env.horizon = vec(e["horizon"]);
            if (e.contains("ground")) s.env.ground = vec(e["ground"]);
            if (e.contains("sun_direction")) s.env.sun_direction = vec(e["sun_direction"]);
            if (e.contains("sun_color")) s.env.sun_color = vec(e["sun_color"]);
            s.env.sun_size_deg = e.value("sun_size_deg", s.env.sun_size_deg);
        }
        s.env_levels = j.value("env_levels", s.env_levels);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed scene descriptor: ") + e.what());
    }
    if (const auto errs = validate(s); !errs.empty())
        throw Error("invalid scene descriptor: " + errs.front());
    return s;
}

SceneDescriptor load_scene(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("cannot open scene '" + path.string() + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed scene JSON '" + path.string() + "': " + e.what());
    }
    SceneDescriptor s = scene_from_json(j);
    // Relative env map paths resolve against the scene file.
    if (!s.env.file.empty() && std::filesystem::path(s.env.file).is_relative())
        s.env.file = (path.parent_path() / s.env.file).string();
    return s;
}

std::optional<Movement> parse_movement(std::string_view s)
{
    if (s == "static") return Movement::Static;
    if (s == "camera") return Movement::Camera;
    if (s == "objects") return Movement::ObjectsAndLight;
    return std::nullopt;
}

std::string_view to_string(Movement m)
{
    switch (m) {
    case Movement::Static: return "static";
    case Movement::Camera: return "camera";
    case Movement::ObjectsAndLight: return "objects";
    }
    return "static";
}

void override_roughness(SceneDescriptor& scene, float roughness)
{
    for (auto& o : scene.objects)
        o.material.roughness = roughness;
    scene.ground.material.roughness = roughness;
}

} // namespace hd::synth
