// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/config.hpp"
#include "hd/frame.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hd::spatial {

/// B3-spline a-trous kernel; taps sit 2^level pixels apart.
struct AtrousKernel {
    static constexpr std::array<float, 5> weights_1d = {1.f / 16.f, 1.f / 4.f, 3.f / 8.f, 1.f / 4.f, 1.f / 16.f};

    int level = 0;

    int step() const { return 1 << level; }
    static constexpr float weight_2d(int i, int j) { return weights_1d[static_cast<std::size_t>(i)] * weights_1d[static_cast<std::size_t>(j)]; }
};

struct EdgeParams {
    float sigma_z = 1.f;
    float sigma_n = 128.f;
    float sigma_l = 4.f;
    float epsilon = 1e-8f;

    static EdgeParams from(const DenoiseConfig& c) { return {c.sigma_z, c.sigma_n, c.sigma_l, 1e-8f}; }
};

struct EdgeAttrs {
    float depth = 0.f;
    Vec3 normal;
    float luma = 0.f;
};

/// Product of the depth, normal and luminance edge-stopping terms.
/// `step_distance` is the pixel distance between centre and tap and scales
/// the relative-depth tolerance.
float edge_weight(const EdgeAttrs& centre, const EdgeAttrs& tap, float centre_variance, float step_distance,
                  const EdgeParams& params);

struct PassStats {
    std::uint64_t taps = 0;
    double seconds = 0.0;
};

struct AtrousResult {
    Image channel;
    Image variance;
    PassStats stats;
};

inline constexpr int kTapsDense = 25;
inline constexpr int kTapsSeparable = 10;

// Uniform level over the frame.
AtrousResult atrous_dense(const Image& channel, const Image& variance, const GBufferFrame& g, int level,
                          const EdgeParams& params);
AtrousResult atrous_separable(const Image& channel, const Image& variance, const GBufferFrame& g, int level,
                              const EdgeParams& params);

// Per-pixel level; a negative level passes the pixel through untouched.
// Background pixels are always passed through and never counted.
AtrousResult atrous_dense(const Image& channel, const Image& variance, const GBufferFrame& g,
                          std::span<const std::int8_t> levels, const EdgeParams& params);
AtrousResult atrous_separable(const Image& channel, const Image& variance, const GBufferFrame& g,
                              std::span<const std::int8_t> levels, const EdgeParams& params);

int select_start_level(ChannelKind kind, float roughness_or_angle, const DenoiseConfig& config);
int select_iteration_count(float roughness, bool ibl_adaptive, int default_iterations);

struct IterationRecord {
    int iteration = 0;
    int min_level = -1;
    int max_level = -1;
    std::uint64_t filtered_pixels = 0;
    PassStats stats;
};

struct DenoiseResult {
    Image channel;
    Image variance;
    Image feedback; // output of iteration 0, or the input when nothing ran
    std::vector<IterationRecord> iterations;
};

/// Runs the iteration schedule chosen per pixel by select_start_level and
/// select_iteration_count. Throws when a level would reach half the
/// smaller image dimension.
DenoiseResult denoise_channel(ChannelKind kind, const Image& channel, const Image& variance, const GBufferFrame& g,
                              const DenoiseConfig& config);

} // namespace hd::spatial
