// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/config.hpp"
#include "hd/image.hpp"

#include <set>

namespace hd {

std::string_view to_string(RectifyMode mode)
{
    switch (mode) {
    case RectifyMode::Off: return "off";
    case RectifyMode::Clamp: return "clamp";
    case RectifyMode::Clip: return "clip";
    }
    return "off";
}

RectifyMode parse_rectify_mode(std::string_view s)
{
    if (s == "off")
        return RectifyMode::Off;
    if (s == "clamp")
        return RectifyMode::Clamp;
    if (s == "clip")
        return RectifyMode::Clip;
    throw Error("unknown rectify mode '" + std::string(s) + "'");
}

std::vector<std::string> validate(const DenoiseConfig& c)
{
    std::vector<std::string> errs;
    auto need = [&](bool ok, const char* msg) {
        if (!ok)
            errs.emplace_back(msg);
    };
    need(c.alpha > 0.f && c.alpha <= 1.f, "alpha must be in (0, 1]");
    need(c.moments_alpha > 0.f && c.moments_alpha <= 1.f, "moments_alpha must be in (0, 1]");
    need(c.clamp_gamma > 0.f, "clamp_gamma must be > 0");
    need(c.sigma_z > 0.f && c.sigma_n > 0.f && c.sigma_l > 0.f, "edge-stopping sigmas must be > 0");
    need(c.iterations >= 0 && c.iterations <= kMaxIterations, "iterations must be in [0, 8]");
    need(c.luma_multiplier >= 0.f, "luma_multiplier must be >= 0");
    need(c.reinhard_weight >= 0.f, "reinhard_weight must be >= 0");
    need(c.spatial_variance_min_history >= 1, "spatial_variance_min_history must be >= 1");
    need(c.consistency.max_relative_depth > 0.f, "consistency depth threshold must be > 0");
    need(c.consistency.min_normal_dot >= -1.f && c.consistency.min_normal_dot <= 1.f,
         "consistency normal threshold must be in [-1, 1]");
    need(c.history_cap >= 1, "history_cap must be >= 1");
    return errs;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {
        "svgf",
        "svgf+rectify",
        "svgf+rectify+adaptive",
        "svgf+rectify+adaptive+separable",
        "svgf+rectify+adaptive+separable+reinhard",
    };
    return names;
}

DenoiseConfig preset(std::string_view name)
{
    const auto& names = preset_names();
    int stage = -1;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            stage = static_cast<int>(i);
    if (stage < 0)
        throw Error("unknown preset '" + std::string(name) + "'");

    DenoiseConfig c;
    c.rectify_mode = stage >= 1 ? RectifyMode::Clamp : RectifyMode::Off;
    c.adaptive_start = stage >= 2;
    c.separable = stage >= 3;
    c.reinhard = stage >= 4;
    return c;
}

namespace {

std::string_view to_string(Feedback f) { return f == Feedback::None ? "none" : "first_iteration"; }
std::string_view to_string(ReinhardInverse r) { return r == ReinhardInverse::Approximate ? "approximate" : "exact"; }

} // namespace

nlohmann::json to_json(const DenoiseConfig& c)
{
    return {
        {"alpha", c.alpha},
        {"moments_alpha", c.moments_alpha},
        {"clamp_gamma", c.clamp_gamma},
        {"rectify_mode", to_string(c.rectify_mode)},
        {"sigma_z", c.sigma_z},
        {"sigma_n", c.sigma_n},
        {"sigma_l", c.sigma_l},
        {"iterations", c.iterations},
        {"adaptive_start", c.adaptive_start},
        {"roughness_start_threshold", c.roughness_start_threshold},
        {"shadow_angle_start_threshold", c.shadow_angle_start_threshold},
        {"separable", c.separable},
        {"reinhard", c.reinhard},
        {"luma_multiplier", c.luma_multiplier},
        {"reinhard_weight", c.reinhard_weight},
        {"reinhard_inverse", to_string(c.reinhard_inverse)},
        {"ibl_adaptive_iterations", c.ibl_adaptive_iterations},
        {"spatial_variance_min_history", c.spatial_variance_min_history},
        {"feedback", to_string(c.feedback)},
        {"consistency_max_relative_depth", c.consistency.max_relative_depth},
        {"consistency_min_normal_dot", c.consistency.min_normal_dot},
        {"history_cap", c.history_cap},
        {"taa", c.taa},
    };
}

void apply_json(DenoiseConfig& c, const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error("denoise config must be a JSON object");
    const auto known = to_json(DenoiseConfig{});
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key))
            throw Error("unknown denoise config key '" + key + "'");
        try {
            if (key == "alpha") c.alpha = value.get<float>();
            else if (key == "moments_alpha") c.moments_alpha = value.get<float>();
            else if (key == "clamp_gamma") c.clamp_gamma = value.get<float>();
            else if (key == "rectify_mode") c.rectify_mode = parse_rectify_mode(value.get<std::string>());
            else if (key == "sigma_z") c.sigma_z = value.get<float>();
            else if (key == "sigma_n") c.sigma_n = value.get<float>();
            else if (key == "sigma_l") c.sigma_l = value.get<float>();
            else if (key == "iterations") c.iterations = value.get<int>();
            else if (key == "adaptive_start") c.adaptive_start = value.get<bool>();
            else if (key == "roughness_start_threshold") c.roughness_start_threshold = value.get<float>();
            else if (key == "shadow_angle_start_threshold") c.shadow_angle_start_threshold = value.get<float>();
            else if (key == "separable") c.separable = value.get<bool>();
            else if (key == "reinhard") c.reinhard = value.get<bool>();
            else if (key == "luma_multiplier") c.luma_multiplier = value.get<float>();
            else if (key == "reinhard_weight") c.reinhard_weight = value.get<float>();
            else if (key == "reinhard_inverse") {
                const auto s = value.get<std::string>();
                if (s != "approximate" && s != "exact")
                    throw Error("reinhard_inverse must be 'approximate' or 'exact'");
                c.reinhard_inverse = s == "approximate" ? ReinhardInverse::Approximate : ReinhardInverse::Exact;
            }
            else if (key == "ibl_adaptive_iterations") c.ibl_adaptive_iterations = value.get<bool>();
            else if (key == "spatial_variance_min_history") c.spatial_variance_min_history = value.get<int>();
            else if (key == "feedback") {
                const auto s = value.get<std::string>();
                if (s != "none" && s != "first_iteration")
                    throw Error("feedback must be 'none' or 'first_iteration'");
                c.feedback = s == "none" ? Feedback::None : Feedback::FirstIteration;
            }
            else if (key == "consistency_max_relative_depth") c.consistency.max_relative_depth = value.get<float>();
            else if (key == "consistency_min_normal_dot") c.consistency.min_normal_dot = value.get<float>();
            else if (key == "history_cap") c.history_cap = value.get<int>();
            else if (key == "taa") c.taa = value.get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw Error("denoise config key '" + key + "': " + e.what());
        }
    }
}

} // namespace hd
