// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/image.hpp"

#include <vector>

namespace hd {

/// Latitude-longitude HDR environment. Texel (i, j) is centred on
/// phi = 2*pi*(i + 0.5)/W, theta = pi*(j + 0.5)/H with +y as the pole and
/// direction (sin(theta)cos(phi), cos(theta), sin(theta)sin(phi)).
class EnvMap {
public:
    EnvMap() = default;
    explicit EnvMap(Image texels);

    const Image& texels() const { return texels_; }
    int width() const { return texels_.width(); }
    int height() const { return texels_.height(); }
    bool empty() const { return texels_.empty(); }

    // Bilinear lookup, wrapping in longitude and clamping in latitude.
    Vec3 lookup(const Vec3& dir) const;

    Vec3 texel_direction(int i, int j) const;
    float texel_solid_angle(int j) const;

private:
    Image texels_;
};

Vec3 bilinear_latlong(const Image& img, const Vec3& dir);
Vec3 latlong_direction(int i, int j, int width, int height);
float latlong_solid_angle(int j, int width, int height);

/// Glossy-prefiltered mip chain over roughness r_k = k / (levels - 1).
/// Level 0 is the source map. Every level keeps the source resolution,
/// which is fine for the low-resolution skies used here.
class PrefilteredEnvMap {
public:
    const std::vector<Image>& levels() const { return levels_; }
    int level_count() const { return static_cast<int>(levels_.size()); }
    float level_roughness(int k) const;

    // Linear interpolation between the two levels bracketing `roughness`.
    Vec3 lookup(const Vec3& dir, float roughness) const;

    friend PrefilteredEnvMap prefilter_env(const EnvMap& env, int levels);

private:
    std::vector<Image> levels_;
};

// Cosine-power lobe exponent used for both glossy sampling and prefiltering.
float phong_exponent(float roughness);

PrefilteredEnvMap prefilter_env(const EnvMap& env, int levels);

} // namespace hd
