// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

// Small builders shared by the unit and acceptance tests.

#pragma once

#include "hd/frame.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace hd::test {

// Flat wall facing the camera: constant depth, +z normal, one object id.
inline GBufferFrame flat_gbuffer(int w, int h, float depth = 5.f, int id = 1)
{
    GBufferFrame g = GBufferFrame::allocate(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            g.depth.at(x, y) = depth;
            g.normal.set_rgb(x, y, {0.f, 0.f, 1.f});
            g.object_id.at(x, y) = static_cast<float>(id);
            g.albedo.set_rgb(x, y, Vec3{0.5f});
            g.roughness.at(x, y) = 0.5f;
            g.shadow_angle.at(x, y) = 6.f;
        }
    return g;
}

inline Image constant(int w, int h, int channels, float v) { return Image(w, h, channels, v); }

inline Image random_image(int w, int h, int channels, unsigned seed, float lo = 0.f, float hi = 1.f)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    Image img(w, h, channels);
    for (float& v : img.data())
        v = u(rng);
    return img;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("hd_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace hd::test
