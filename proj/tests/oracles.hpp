// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations written independently of the library code.

#pragma once

#include "hd/frame.hpp"
#include "hd/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace hd::test {

// Direct 5x5 edge-aware convolution at the given level, in double precision.
inline void bilateral_oracle(const Image& ch, const Image& var, const GBufferFrame& g, int level,
                             const spatial::EdgeParams& p, Image& out, Image& out_var)
{
    static constexpr double b3[5] = {1.0 / 16, 1.0 / 4, 3.0 / 8, 1.0 / 4, 1.0 / 16};
    const int w = g.width, h = g.height, step = 1 << level;
    out = ch;
    out_var = var;
    auto luma = [&](int x, int y) {
        return ch.channels() == 1 ? static_cast<double>(ch.at(x, y))
                                  : 0.2126 * ch.at(x, y, 0) + 0.7152 * ch.at(x, y, 1) + 0.0722 * ch.at(x, y, 2);
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (g.object_id.at(x, y) == 0.f)
                continue;
            double sum[3] = {0, 0, 0}, ws = 0, vs = 0;
            for (int j = -2; j <= 2; ++j)
                for (int i = -2; i <= 2; ++i) {
                    const int tx = std::clamp(x + i * step, 0, w - 1);
                    const int ty = std::clamp(y + j * step, 0, h - 1);
                    double wt = b3[i + 2] * b3[j + 2];
                    if (i != 0 || j != 0) {
                        if (g.object_id.at(tx, ty) == 0.f)
                            continue;
                        const double dist = std::hypot(i * step, j * step);
                        const double zc = g.depth.at(x, y), zt = g.depth.at(tx, ty);
                        const double wz = std::exp(-std::abs(zc - zt) / (p.sigma_z * std::abs(zc) * dist + p.epsilon));
                        const Vec3 nc = g.n(x, y), nt = g.n(tx, ty);
                        const double nd = std::max(0.0, static_cast<double>(nc.x) * nt.x +
                                                            static_cast<double>(nc.y) * nt.y +
                                                            static_cast<double>(nc.z) * nt.z);
                        const double wn = std::pow(nd, p.sigma_n);
                        const double wl = std::exp(-std::abs(luma(x, y) - luma(tx, ty)) /
                                                   (p.sigma_l * std::sqrt(std::max(0.f, var.at(x, y))) + p.epsilon));
                        wt *= wz * wn * wl;
                    }
                    for (int c = 0; c < ch.channels(); ++c)
                        sum[c] += wt * ch.at(tx, ty, c);
                    ws += wt;
                    vs += wt * wt * var.at(tx, ty);
                }
            for (int c = 0; c < ch.channels(); ++c)
                out.at(x, y, c) = static_cast<float>(sum[c] / ws);
            out_var.at(x, y) = static_cast<float>(vs / (ws * ws));
        }
}

inline double max_abs_diff(const Image& a, const Image& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    return m;
}

} // namespace hd::test
