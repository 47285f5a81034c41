// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/env_map.hpp"
#include "hd/frame.hpp"
#include "hd/view.hpp"

namespace hd::compose {

// Unshadowed Lambertian direct light from the light centre; background is 0.
Image shade_direct(const GBufferFrame& g, const Camera& camera, const LightState& light);

// Foreground: emissive + direct * shadow + specular. Background: sky along the camera ray.
Image composite(const Image& direct, const Image& shadow, const Image& specular, const GBufferFrame& g,
                const EnvMap& env, const Camera& camera);

struct TaaParams {
    float blend = 0.1f; // weight of the current frame
    float gamma = 1.f;  // clamp box half-width in standard deviations
};

/// Simplified temporal antialiasing: reproject the previous output through
/// the motion channel, clamp it to the current 3x3 neighbourhood box and
/// blend. Passes `curr` through when there is no previous output.
Image taa(const Image& curr, const Image* prev_taa, const GBufferFrame& g, const GBufferFrame* prev_g,
          const TaaParams& params = {});

} // namespace hd::compose
