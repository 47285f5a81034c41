// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/image.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hd::metrics {

inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

// HDR value to [0, 1]: x / (1 + x), clamped.
float exposure_map(float x);

// Single-channel [0, 1] plane of an image's luminance after exposure_map.
Image ssim_plane(const Image& img);

// Mean SSIM over every 8x8 window of two single-channel planes already in
// [0, 1]. Windows shrink to the image size for images smaller than 8.
double ssim_planes(const Image& a, const Image& b);

// SSIM of two HDR images of any channel count: luminance, exposure map,
// then ssim_planes. Throws hd::Error on a size mismatch.
double ssim(const Image& a, const Image& b);

// Mean squared componentwise difference. Throws on a shape mismatch.
double mse(const Image& a, const Image& b);

struct TimingSummary {
    double min = 0.0;
    double avg = 0.0;
    double max = 0.0;
    int samples = 0;
};

TimingSummary summarize(const std::vector<double>& seconds);

struct BenchResult {
    TimingSummary seconds;
    std::uint64_t taps = 0;
    std::vector<double> samples;
};

/// Times `pass` `repetitions` times after one discarded warm-up run. The
/// closure returns its tap count, which must not vary between runs.
BenchResult bench_pass(const std::function<std::uint64_t()>& pass, int repetitions);

/// One result row, keyed by the evaluation axes.
struct Record {
    std::string scene;
    std::string stack;
    std::string parameter; // "roughness", "shadow_angle", ...
    double value = 0.0;
    std::string movement;
    int frame = -1; // -1 for a whole-sequence mean
    double ssim = 0.0;
    double mse = 0.0;
};

nlohmann::json to_json(const Record& r);
nlohmann::json report_json(const std::vector<Record>& records);
std::string report_csv(const std::vector<Record>& records);

} // namespace hd::metrics
