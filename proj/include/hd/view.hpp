// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/math.hpp"

namespace hd {

/// Pinhole camera bound to an image resolution. Pixel (x, y) covers
/// [x, x+1) x [y, y+1) with row 0 at the top; centres sit at +0.5.
struct Camera {
    Vec3 position;
    Vec3 forward{0.f, 0.f, -1.f};
    Vec3 right{1.f, 0.f, 0.f};
    Vec3 up{0.f, 1.f, 0.f};
    float tan_half_fov = 0.41421356f; // 45 degrees
    int width = 1;
    int height = 1;

    static Camera look_at(const Vec3& position, const Vec3& target, const Vec3& world_up,
                          float vfov_deg, int width, int height);

    float aspect() const { return static_cast<float>(width) / static_cast<float>(height); }

    // Unit direction through the continuous pixel position (px, py).
    Vec3 direction(float px, float py) const
    {
        const float u = (2.f * px / static_cast<float>(width) - 1.f) * tan_half_fov * aspect();
        const float v = (1.f - 2.f * py / static_cast<float>(height)) * tan_half_fov;
        return normalize(forward + right * u + up * v);
    }
    Vec3 primary_direction(int x, int y) const
    {
        return direction(static_cast<float>(x) + 0.5f, static_cast<float>(y) + 0.5f);
    }

    // Continuous pixel coordinates of a world point (inverse of direction()).
    Vec2 project(const Vec3& p) const
    {
        const Vec3 q = p - position;
        const float z = dot(q, forward);
        const float u = dot(q, right) / (z * tan_half_fov * aspect());
        const float v = dot(q, up) / (z * tan_half_fov);
        return {(u + 1.f) * 0.5f * static_cast<float>(width), (1.f - v) * 0.5f * static_cast<float>(height)};
    }

    friend bool operator==(const Camera&, const Camera&) = default;
};

/// Spherical area light at one frame.
struct LightState {
    Vec3 center;
    float radius = 0.f;
    Vec3 intensity{1.f, 1.f, 1.f};
};

} // namespace hd
