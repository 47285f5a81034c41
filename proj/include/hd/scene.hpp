// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/env_map.hpp"
#include "hd/view.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hd::synth {

struct Material {
    Vec3 albedo{0.7f};
    float roughness = 1.f;
    Vec3 emissive{};
    // Scalar reflectance applied to the glossy (indirect specular) lobe.
    float specular = 0.5f;
};

struct Keyframe {
    int frame = 0;
    Vec3 value;
};

// Piecewise-linear track; clamps outside the keyed range. Two keys on
// consecutive frames give a teleport.
Vec3 evaluate_track(const std::vector<Keyframe>& keys, int frame, const Vec3& fallback = {});

struct CameraKey {
    int frame = 0;
    Vec3 position;
    Vec3 target;
};

struct CameraDesc {
    std::vector<CameraKey> keys;
    Vec3 up{0.f, 1.f, 0.f};
    float vfov_deg = 45.f;
};

enum class Shape { Sphere, Box };

struct ObjectDesc {
    Shape shape = Shape::Sphere;
    int id = 1;
    Vec3 center;
    float radius = 1.f;      // spheres
    Vec3 half_extent{0.5f};  // boxes
    Material material;
    std::vector<Keyframe> offset_keys; // translation relative to `center`
};

struct GroundDesc {
    bool enabled = true;
    float height = 0.f;
    int id = 1;
    Material material;
};

struct LightDesc {
    std::vector<Keyframe> center_keys;
    Vec3 intensity{100.f};
};

struct EnvDesc {
    // Either a procedural sky (file empty) or a PFM on disk.
    std::string file;
    int width = 32;
    int height = 16;
    Vec3 zenith{0.25f, 0.35f, 0.6f};
    Vec3 horizon{0.6f, 0.6f, 0.65f};
    Vec3 ground{0.2f, 0.18f, 0.15f};
    Vec3 sun_direction{0.4f, 0.6f, -0.7f};
    Vec3 sun_color{4.f, 3.6f, 3.f};
    float sun_size_deg = 12.f; // 0 disables the sun blob
};

struct SceneDescriptor {
    std::string name = "scene";
    int frame_count = 1;
    int width = 128;
    int height = 128;
    CameraDesc camera;
    std::vector<ObjectDesc> objects;
    GroundDesc ground;
    LightDesc light;
    // Apex angle of the cone the light subtends at `reference_point`.
    float shadow_angle_deg = 6.f;
    Vec3 reference_point{};
    EnvDesc env;
    int env_levels = 6;
};

std::vector<std::string> validate(const SceneDescriptor& scene);

nlohmann::json to_json(const SceneDescriptor& scene);
SceneDescriptor scene_from_json(const nlohmann::json& j);
SceneDescriptor load_scene(const std::filesystem::path& path);

// Light radius implied by the shadow angle at the given light centre.
float light_radius(const SceneDescriptor& scene, const Vec3& light_center);

Camera camera_at(const SceneDescriptor& scene, int frame);
LightState light_at(const SceneDescriptor& scene, int frame);
Image make_env_image(const SceneDescriptor& scene);

enum class Movement { Static, Camera, ObjectsAndLight };
std::optional<Movement> parse_movement(std::string_view s);
std::string_view to_string(Movement m);

const std::vector<std::string>& scene_preset_names();
// Synthetic stand-ins for the evaluation scenes; throws hd::Error on unknown names.
SceneDescriptor scene_preset(std::string_view name, Movement movement = Movement::Static, int frames = 16);

// Sets every material roughness (objects and ground).
void override_roughness(SceneDescriptor& scene, float roughness);

} // namespace hd::synth
