// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/scene.hpp"

namespace hd::synth {

namespace {

ObjectDesc sphere(int id, Vec3 c, float r, Vec3 albedo, float rough, float spec)
{
    ObjectDesc o;
    o.shape = Shape::Sphere;
    o.id = id;
    o.center = c;
    o.radius = r;
    o.material.albedo = albedo;
    o.material.roughness = rough;
    o.material.specular = spec;
    return o;
}

ObjectDesc box(int id, Vec3 c, Vec3 half, Vec3 albedo, float rough, float spec)
{
    ObjectDesc o;
    o.shape = Shape::Box;
    o.id = id;
    o.center = c;
    o.half_extent = half;
    o.material.albedo = albedo;
    o.material.roughness = rough;
    o.material.specular = spec;
    return o;
}

void set_camera(SceneDescriptor& s, Movement m, Vec3 pos, Vec3 target, Vec3 pan)
{
    s.camera.keys = {{0, pos, target}};
    if (m == Movement::Camera && s.frame_count > 1)
        s.camera.keys.push_back({s.frame_count - 1, pos + pan, target + pan});
}

void set_light(SceneDescriptor& s, Movement m, Vec3 center, Vec3 travel)
{
    s.light.center_keys = {{0, center}};
    if (m == Movement::ObjectsAndLight && s.frame_count > 1)
        s.light.center_keys.push_back({s.frame_count - 1, center + travel});
}

void move_object(SceneDescriptor& s, Movement m, std::size_t index, Vec3 travel)
{
    if (m != Movement::ObjectsAndLight || s.frame_count < 2 || index >= s.objects.size())
        return;
    s.objects[index].offset_keys = {{0, Vec3{}}, {s.frame_count - 1, travel}};
}

SceneDescriptor shadow_objects(Movement m, int frames)
{
    SceneDescriptor s;
    s.name = "shadow-objects";
    s.frame_count = frames;
    s.ground.material = {Vec3{0.75f}, 1.f, Vec3{}, 0.05f};
    s.objects = {
        sphere(2, {-1.6f, 1.f, 0.f}, 1.f, {0.8f, 0.3f, 0.25f}, 0.6f, 0.2f),
        box(3, {1.4f, 0.7f, 0.3f}, Vec3{0.7f}, {0.3f, 0.6f, 0.8f}, 0.8f, 0.2f),
        sphere(4, {0.3f, 0.45f, 2.f}, 0.45f, {0.9f, 0.85f, 0.3f}, 0.5f, 0.2f),
        box(5, {-0.2f, 1.5f, -2.f}, {0.35f, 1.5f, 0.35f}, Vec3{0.6f}, 0.9f, 0.1f),
    };
    s.light.intensity = Vec3{250.f};
    s.shadow_angle_deg = 6.f;
    set_camera(s, m, {0.f, 6.f, 9.5f}, {0.f, 0.3f, 0.f}, {2.f, 0.f, 0.f});
    set_light(s, m, {3.f, 8.f, 2.f}, {-4.f, 0.f, 0.f});
    move_object(s, m, 0, {1.5f, 0.f, 0.f});
    move_object(s, m, 2, {-1.f, 0.f, -1.f});
    return s;
}

SceneDescriptor cubes_distance(Movement m, int frames)
{
    SceneDescriptor s;
    s.name = "cubes-distance";
    s.frame_count = frames;
    s.ground.material = {Vec3{0.35f}, 0.3f, Vec3{}, 0.8f};
    s.objects = {
        box(2, {-1.2f, 0.5f, 0.f}, Vec3{0.5f}, {0.85f, 0.2f, 0.2f}, 0.3f, 0.5f),
        box(3, {1.2f, 0.5f, -2.5f}, Vec3{0.5f}, {0.2f, 0.8f, 0.25f}, 0.3f, 0.5f),
        box(4, {-1.2f, 0.5f, -5.f}, Vec3{0.5f}, {0.2f, 0.35f, 0.9f}, 0.3f, 0.5f),
        box(5, {1.2f, 0.5f, -7.5f}, Vec3{0.5f}, {0.9f, 0.8f, 0.2f}, 0.3f, 0.5f),
        sphere(6, {0.f, 0.6f, -3.5f}, 0.6f, Vec3{0.9f}, 0.3f, 0.6f),
    };
    s.light.intensity = Vec3{220.f};
    s.shadow_angle_deg = 3.f;
    s.reference_point = {0.f, 0.f, -3.f};
    set_camera(s, m, {0.f, 1.6f, 5.f}, {0.f, 0.5f, -4.f}, {1.5f, 0.f, 0.f});
    set_light(s, m, {2.f, 9.f, 1.f}, {-3.f, 0.f, -2.f});
    move_object(s, m, 0, {0.f, 0.f, -1.5f});
    move_object(s, m, 4, {1.2f, 0.f, 0.f});
    return s;
}

SceneDescriptor pillars(Movement m, int frames)
{
    SceneDescriptor s;
    s.name = "pillars";
    s.frame_count = frames;
    s.ground.material = {Vec3{0.7f, 0.68f, 0.62f}, 0.9f, Vec3{}, 0.1f};
    int id = 2;
    for (int i = -1; i <= 1; ++i)
        for (int k = -1; k <= 1; ++k)
            s.objects.push_back(box(id++, {2.f * i, 1.5f, 2.f * k}, {0.25f, 1.5f, 0.25f},
                                    Vec3{0.75f, 0.72f, 0.7f}, 0.7f, 0.15f));
    s.light.intensity = Vec3{220.f};
    s.shadow_angle_deg = 8.f;
    set_camera(s, m, {0.f, 7.f, 8.f}, {0.f, 0.5f, 0.f}, {2.f, 0.f, 0.f});
    set_light(s, m, {6.f, 6.f, 1.f}, {-2.f, 0.f, 4.f});
    move_object(s, m, 4, {0.f, 0.f, 1.f});
    return s;
}

SceneDescriptor breakfast_lite(Movement m, int frames)
{
    SceneDescriptor s;
    s.name = "breakfast-lite";
    s.frame_count = frames;
    s.ground.material = {Vec3{0.55f, 0.45f, 0.35f}, 0.7f, Vec3{}, 0.2f};
    s.objects = {
        box(2, {0.f, 3.f, -3.5f}, {6.f, 3.f, 0.2f}, Vec3{0.8f, 0.78f, 0.72f}, 1.f, 0.05f),
        box(3, {0.f, 1.f, 0.f}, {2.f, 0.08f, 1.2f}, {0.6f, 0.4f, 0.25f}, 0.4f, 0.4f),
        box(4, {-1.8f, 0.46f, -1.f}, {0.08f, 0.46f, 0.08f}, {0.5f, 0.35f, 0.2f}, 0.8f, 0.1f),
        box(5, {1.8f, 0.46f, -1.f}, {0.08f, 0.46f, 0.08f}, {0.5f, 0.35f, 0.2f}, 0.8f, 0.1f),
        box(6, {-1.8f, 0.46f, 1.f}, {0.08f, 0.46f, 0.08f}, {0.5f, 0.35f, 0.2f}, 0.8f, 0.1f),
        box(7, {1.8f, 0.46f, 1.f}, {0.08f, 0.46f, 0.08f}, {0.5f, 0.35f, 0.2f}, 0.8f, 0.1f),
        sphere(8, {-0.8f, 1.38f, 0.2f}, 0.3f, {0.9f, 0.9f, 0.88f}, 0.1f, 0.6f),
        box(9, {0.5f, 1.48f, -0.4f}, {0.25f, 0.4f, 0.1f}, {0.85f, 0.6f, 0.15f}, 0.6f, 0.2f),
        sphere(10, {1.2f, 1.23f, 0.5f}, 0.15f, {0.8f, 0.15f, 0.1f}, 0.2f, 0.5f),
    };
    s.light.intensity = Vec3{160.f};
    s.shadow_angle_deg = 6.f;
    s.reference_point = {0.f, 1.f, 0.f};
    set_camera(s, m, {0.5f, 3.2f, 5.f}, {0.f, 1.1f, -0.5f}, {1.2f, 0.f, 0.f});
    set_light(s, m, {0.5f, 5.5f, 2.f}, {-2.f, 0.f, 0.f});
    move_object(s, m, 6, {0.8f, 0.f, 0.f});
    return s;
}

} // namespace

const std::vector<std::string>& scene_preset_names()
{
    static const std::vector<std::string> names = {"cubes-distance", "shadow-objects", "pillars", "breakfast-lite"};
    return names;
}

SceneDescriptor scene_preset(std::string_view name, Movement movement, int frames)
{
    if (frames < 1)
        throw Error("scene preset needs at least one frame");
    if (name == "shadow-objects")
        return shadow_objects(movement, frames);
    if (name == "cubes-distance")
        return cubes_distance(movement, frames);
    if (name == "pillars")
        return pillars(movement, frames);
    if (name == "breakfast-lite")
        return breakfast_lite(movement, frames);
    throw Error("unknown scene preset '" + std::string(name) + "'");
}

} // namespace hd::synth
