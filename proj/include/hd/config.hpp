// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace hd {

enum class RectifyMode { Off, Clamp, Clip };
enum class Feedback { None, FirstIteration };
enum class ReinhardInverse { Approximate, Exact };

/// Thresholds for deciding whether a previous-frame texel belongs to the
/// same surface as the current pixel.
struct ConsistencyParams {
    float max_relative_depth = 0.1f;
    float min_normal_dot = 0.9f;
};

/// Every tunable of the denoiser.
struct DenoiseConfig {
    float alpha = 0.2f;
    float moments_alpha = 0.2f;
    float clamp_gamma = 1.0f;
    RectifyMode rectify_mode = RectifyMode::Clamp;

    float sigma_z = 1.0f;
    float sigma_n = 128.0f;
    float sigma_l = 4.0f;
    int iterations = 4;

    bool adaptive_start = false;
    float roughness_start_threshold = 0.2f;
    float shadow_angle_start_threshold = 6.0f; // degrees

    bool separable = false;

    bool reinhard = false;
    float luma_multiplier = 1.0f;
    float reinhard_weight = 1.0f;
    ReinhardInverse reinhard_inverse = ReinhardInverse::Approximate;

    bool ibl_adaptive_iterations = false;
    int spatial_variance_min_history = 4;

    Feedback feedback = Feedback::FirstIteration;
    ConsistencyParams consistency;
    int history_cap = 256;
    bool taa = true;
};

inline constexpr int kMaxIterations = 8;

// Empty when the config is valid.
std::vector<std::string> validate(const DenoiseConfig& config);

// Technique stacks, each built on top of the previous one.
const std::vector<std::string>& preset_names();
DenoiseConfig preset(std::string_view name); // throws hd::Error on unknown names

// Overwrites only the fields present in `j`; unknown keys are rejected.
void apply_json(DenoiseConfig& config, const nlohmann::json& j);
nlohmann::json to_json(const DenoiseConfig& config);

std::string_view to_string(RectifyMode mode);
RectifyMode parse_rectify_mode(std::string_view s);

} // namespace hd
