// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/tonemap.hpp"
#include "hd/parallel.hpp"

namespace hd::tonemap {

Vec3 reinhard_forward(const Vec3& c, float luma_multiplier)
{
    return c / (1.f + luma(c) * luma_multiplier);
}

Vec3 reinhard_inverse_paper(const Vec3& c, float weight)
{
    return c * (1.f + luma(c)) * weight;
}

Vec3 reinhard_inverse_exact(const Vec3& c, float luma_multiplier)
{
    const float d = 1.f - luma(c) * luma_multiplier;
    if (!(d > 0.f))
        throw Error("reinhard_inverse_exact: luma * multiplier must be below 1");
    return c / d;
}

namespace {

template <class F>
Image map_pixels(const Image& img, F&& f)
{
    Image out = img;
    parallel_rows(img.height(), [&](int y) {
        for (int x = 0; x < img.width(); ++x)
            out.set_rgb(x, y, f(img.rgb(x, y)));
    });
    return out;
}

} // namespace

Image reinhard_forward(const Image& img, float luma_multiplier)
{
    return map_pixels(img, [&](const Vec3& c) { return reinhard_forward(c, luma_multiplier); });
}

Image reinhard_inverse_paper(const Image& img, float weight)
{
    return map_pixels(img, [&](const Vec3& c) { return reinhard_inverse_paper(c, weight); });
}

Image reinhard_inverse_exact(const Image& img, float luma_multiplier)
{
    // Exceptions must not escape the parallel loop, so check first.
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (!(luma(img.rgb(x, y)) * luma_multiplier < 1.f))
                throw Error("reinhard_inverse_exact: luma * multiplier must be below 1");
    return map_pixels(img, [&](const Vec3& c) { return c / (1.f - luma(c) * luma_multiplier); });
}

} // namespace hd::tonemap
