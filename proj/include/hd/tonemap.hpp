// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/image.hpp"

namespace hd::tonemap {

inline float luma(const Vec3& c) { return luminance(c); }

// c / (1 + luma(c) * luma_multiplier)
Vec3 reinhard_forward(const Vec3& c, float luma_multiplier);

// c * (1 + luma(c)) * weight. Only an approximate inverse of the forward map.
Vec3 reinhard_inverse_paper(const Vec3& c, float weight);

// c / (1 - luma(c) * luma_multiplier); throws hd::Error outside its domain.
Vec3 reinhard_inverse_exact(const Vec3& c, float luma_multiplier);

Image reinhard_forward(const Image& img, float luma_multiplier);
Image reinhard_inverse_paper(const Image& img, float weight);
Image reinhard_inverse_exact(const Image& img, float luma_multiplier);

} // namespace hd::tonemap
