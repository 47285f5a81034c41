// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/config.hpp"
#include "hd/frame.hpp"

#include <array>
#include <span>
#include <vector>

namespace hd::temporal {

// Channel value of arity 1 (shadow) or 3 (specular); unused lanes stay 0.
using Value = std::array<float, 3>;

inline constexpr int kMaxHistory = 256;

struct PixelAttrs {
    int object_id = 0;
    float depth = 0.f;
    Vec3 normal;
};

PixelAttrs attrs_at(const GBufferFrame& g, int x, int y);

// Same object, relative depth difference below the threshold and normals
// closer than the threshold.
bool consistency_test(const PixelAttrs& prev, const PixelAttrs& curr, const ConsistencyParams& params = {});

struct ReprojectionTap {
    bool valid = false;
    Value color{};
    float moment1 = 0.f;
    float moment2 = 0.f;
    int history_len = 0;
};

/// Backward reprojection of `prev` into pixel (x, y) of the current frame
/// via bilinear interpolation over the consistent texels of the 2x2
/// footprint around centre + motion.
ReprojectionTap reproject_tap(const TemporalHistory& prev, const GBufferFrame& prev_g, const GBufferFrame& curr_g,
                              int x, int y, const ConsistencyParams& params = {});

/// Bilinear fetch of an arbitrary image at pixel centre + motion with the
/// same 2x2 consistency weighting. Background pixels reproject onto
/// background texels. Returns false when nothing usable was found.
bool reproject_value(const Image& prev, const GBufferFrame& prev_g, const GBufferFrame& curr_g, int x, int y,
                     const ConsistencyParams& params, Value& out);

struct HistoryPixel {
    Value color{};
    float moment1 = 0.f;
    float moment2 = 0.f;
    int history_len = 0;
};

HistoryPixel accumulate(const Value& curr_value, int arity, float curr_luma, const ReprojectionTap& tap,
                        float alpha, float moments_alpha, int history_cap = kMaxHistory);

float moments_variance(float moment1, float moment2);

// Luminance variance over a set of samples (population form).
float sample_variance(std::span<const float> lumas);

/// Temporal variance once enough frames were integrated; otherwise the
/// spatial variance of current-frame luminance over the consistent part
/// of the 7x7 neighbourhood.
float estimate_variance(const HistoryPixel& h, const Image& curr_luma, const GBufferFrame& g, int x, int y,
                        int min_history, const ConsistencyParams& params = {});

struct RectificationBox {
    Value mean{};
    Value stddev{};
    float gamma = 1.f;
    int arity = 1;

    float lo(int c) const { return mean[static_cast<std::size_t>(c)] - gamma * stddev[static_cast<std::size_t>(c)]; }
    float hi(int c) const { return mean[static_cast<std::size_t>(c)] + gamma * stddev[static_cast<std::size_t>(c)]; }
    bool contains(const Value& v, float tolerance = 0.f) const;
};

RectificationBox make_box(std::span<const Value> neighborhood, int arity, float gamma);

// Clamp: componentwise clamp into the box. Clip: pull toward the mean
// along the mean-to-tap segment until the box boundary.
Value rectify_history(const Value& tap_color, const RectificationBox& box, RectifyMode mode);

// Convenience overload building the box from the neighbourhood.
Value rectify_history(const Value& tap_color, std::span<const Value> neighborhood, int arity, float gamma,
                      RectifyMode mode);

// Moments after the colour was rectified: blend stored moments 50/50 with
// the moments of the rectified luminance.
void rectify_moments(ReprojectionTap& tap, float rectified_luma);

/// Record of one rectification, for diagnostics.
struct RectifyEvent {
    int x = 0;
    int y = 0;
    Value tap{};
    Value rectified{};
    RectificationBox box;
};

struct TemporalResult {
    TemporalHistory history; // accumulated colour, moments and lengths
    Image variance;          // 1 ch, luminance variance
};

/// Full temporal stage for one channel and frame. `prev` and `prev_g` are
/// null on the first frame. `current` must already be in the domain that
/// gets filtered (e.g. tone-mapped). Background pixels get no history.
TemporalResult run(const Image& current, const TemporalHistory* prev, const GBufferFrame* prev_g,
                   const GBufferFrame& g, const DenoiseConfig& config, std::vector<RectifyEvent>* events = nullptr);

} // namespace hd::temporal
