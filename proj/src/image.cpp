// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/image.hpp"

#include <cstring>

namespace hd {

bool bit_equal(const Image& a, const Image& b)
{
    if (!a.same_shape(b))
        return false;
    const auto da = a.data();
    const auto db = b.data();
    return da.empty() || std::memcmp(da.data(), db.data(), da.size_bytes()) == 0;
}

Image luminance_image(const Image& img)
{
    Image out(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = pixel_luminance(img, x, y);
    return out;
}

} // namespace hd
