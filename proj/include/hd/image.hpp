// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/math.hpp"

#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major float image with 1..4 interleaved channels. Row 0 is the top row.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, float fill = 0.f)
        : width_(width), height_(height), channels_(channels),
          px_(static_cast<std::size_t>(width) * height * channels, fill)
    {
        if (width < 0 || height < 0 || channels < 1 || channels > 4)
            throw Error("invalid image shape");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return px_.empty(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    bool same_shape(const Image& o) const
    {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }
    bool same_size(const Image& o) const { return width_ == o.width_ && height_ == o.height_; }

    float& at(int x, int y, int c = 0)
    {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c < channels_);
        return px_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float at(int x, int y, int c = 0) const
    {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c < channels_);
        return px_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    // Scalar images broadcast to grey; two-channel images leave z at 0.
    Vec3 rgb(int x, int y) const
    {
        const float* p = &px_[(static_cast<std::size_t>(y) * width_ + x) * channels_];
        if (channels_ == 1)
            return Vec3(p[0]);
        return {p[0], p[1], channels_ > 2 ? p[2] : 0.f};
    }
    void set_rgb(int x, int y, const Vec3& v)
    {
        float* p = &px_[(static_cast<std::size_t>(y) * width_ + x) * channels_];
        for (int c = 0; c < channels_ && c < 3; ++c)
            p[c] = v[c];
    }

    std::span<float> data() { return px_; }
    std::span<const float> data() const { return px_; }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> px_;
};

// Bitwise equality, distinguishing -0/+0 and treating identical NaN payloads as equal.
bool bit_equal(const Image& a, const Image& b);

// Per-pixel luminance: identity for scalar images, Rec.709 otherwise.
Image luminance_image(const Image& img);

inline float pixel_luminance(const Image& img, int x, int y)
{
    return img.channels() == 1 ? img.at(x, y) : luminance(img.rgb(x, y));
}

} // namespace hd
