// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/env_map.hpp"
#include "hd/parallel.hpp"
#include "hd/view.hpp"

#include <limits>

namespace hd {

Camera Camera::look_at(const Vec3& position, const Vec3& target, const Vec3& world_up,
                       float vfov_deg, int width, int height)
{
    Camera c;
    c.position = position;
    c.forward = normalize(target - position);
    c.right = normalize(cross(c.forward, world_up));
    c.up = cross(c.right, c.forward);
    c.tan_half_fov = std::tan(vfov_deg * kPi / 360.f);
    c.width = width;
    c.height = height;
    return c;
}

Vec3 latlong_direction(int i, int j, int width, int height)
{
    const float phi = 2.f * kPi * (static_cast<float>(i) + 0.5f) / static_cast<float>(width);
    const float theta = kPi * (static_cast<float>(j) + 0.5f) / static_cast<float>(height);
    const float st = std::sin(theta);
    return {st * std::cos(phi), std::cos(theta), st * std::sin(phi)};
}

float latlong_solid_angle(int j, int width, int height)
{
    const float t0 = kPi * static_cast<float>(j) / static_cast<float>(height);
    const float t1 = kPi * static_cast<float>(j + 1) / static_cast<float>(height);
    return 2.f * kPi / static_cast<float>(width) * (std::cos(t0) - std::cos(t1));
}

Vec3 bilinear_latlong(const Image& img, const Vec3& dir)
{
    const int w = img.width();
    const int h = img.height();
    const float theta = std::acos(std::clamp(dir.y, -1.f, 1.f));
    float phi = std::atan2(dir.z, dir.x);
    if (phi < 0.f)
        phi += 2.f * kPi;
    const float u = phi / (2.f * kPi) * static_cast<float>(w) - 0.5f;
    const float v = theta / kPi * static_cast<float>(h) - 0.5f;
    const float fu = std::floor(u);
    const float fv = std::floor(v);
    const float tu = u - fu;
    const float tv = v - fv;
    auto wrap = [w](int i) { return ((i % w) + w) % w; };
    auto clampv = [h](int j) { return std::clamp(j, 0, h - 1); };
    const int i0 = wrap(static_cast<int>(fu));
    const int i1 = wrap(static_cast<int>(fu) + 1);
    const int j0 = clampv(static_cast<int>(fv));
    const int j1 = clampv(static_cast<int>(fv) + 1);
    const Vec3 top = lerp(img.rgb(i0, j0), img.rgb(i1, j0), tu);
    const Vec3 bot = lerp(img.rgb(i0, j1), img.rgb(i1, j1), tu);
    return lerp(top, bot, tv);
}

EnvMap::EnvMap(Image texels) : texels_(std::move(texels))
{
    if (texels_.channels() != 3)
        throw Error("environment map must be RGB");
    if (texels_.width() < 8 || texels_.height() < 4)
        throw Error("environment map must be at least 8x4");
}

Vec3 EnvMap::lookup(const Vec3& dir) const { return bilinear_latlong(texels_, dir); }

Vec3 EnvMap::texel_direction(int i, int j) const { return latlong_direction(i, j, width(), height()); }

float EnvMap::texel_solid_angle(int j) const { return latlong_solid_angle(j, width(), height()); }

float phong_exponent(float roughness)
{
    if (roughness <= 0.f)
        return std::numeric_limits<float>::infinity();
    return std::max(1.f, 2.f / (roughness * roughness) - 2.f);
}

float PrefilteredEnvMap::level_roughness(int k) const
{
    const int n = level_count();
    return n <= 1 ? 0.f : static_cast<float>(k) / static_cast<float>(n - 1);
}

Vec3 PrefilteredEnvMap::lookup(const Vec3& dir, float roughness) const
{
    const int n = level_count();
    if (n == 1)
        return bilinear_latlong(levels_[0], dir);
    const float pos = std::clamp(roughness, 0.f, 1.f) * static_cast<float>(n - 1);
    const int k0 = std::min(static_cast<int>(pos), n - 1);
    const int k1 = std::min(k0 + 1, n - 1);
    const float t = pos - static_cast<float>(k0);
    const Vec3 a = bilinear_latlong(levels_[static_cast<std::size_t>(k0)], dir);
    if (t == 0.f || k0 == k1)
        return a;
    return lerp(a, bilinear_latlong(levels_[static_cast<std::size_t>(k1)], dir), t);
}

PrefilteredEnvMap prefilter_env(const EnvMap& env, int levels)
{
    if (levels < 1)
        throw Error("prefilter_env: levels must be >= 1");
    PrefilteredEnvMap out;
    out.levels_.push_back(env.texels());

    const int w = env.width();
    const int h = env.height();
    std::vector<Vec3> dirs(static_cast<std::size_t>(w) * h);
    std::vector<float> omega(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) {
        omega[static_cast<std::size_t>(j)] = env.texel_solid_angle(j);
        for (int i = 0; i < w; ++i)
            dirs[static_cast<std::size_t>(j) * w + i] = env.texel_direction(i, j);
    }

    for (int k = 1; k < levels; ++k) {
        const float r = static_cast<float>(k) / static_cast<float>(levels - 1);
        const double e = phong_exponent(r);
        Image level(w, h, 3);
        parallel_rows(h, [&](int y) {
            for (int x = 0; x < w; ++x) {
                const Vec3 d = dirs[static_cast<std::size_t>(y) * w + x];
                double sum[3] = {0.0, 0.0, 0.0};
                double wsum = 0.0;
                for (int j = 0; j < h; ++j)
                    for (int i = 0; i < w; ++i) {
                        const float c = dot(d, dirs[static_cast<std::size_t>(j) * w + i]);
                        if (c <= 0.f)
                            continue;
                        const double wt = std::pow(static_cast<double>(c), e) * omega[static_cast<std::size_t>(j)];
                        const Vec3 l = env.texels().rgb(i, j);
                        sum[0] += wt * l.x;
                        sum[1] += wt * l.y;
                        sum[2] += wt * l.z;
                        wsum += wt;
                    }
                for (int c = 0; c < 3; ++c)
                    level.at(x, y, c) = static_cast<float>(sum[c] / wsum);
            }
        });
        out.levels_.push_back(std::move(level));
    }
    return out;
}

} // namespace hd
