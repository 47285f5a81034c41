// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/compose.hpp"
#include "hd/parallel.hpp"
#include "hd/temporal.hpp"

namespace hd::compose {

Image shade_direct(const GBufferFrame& g, const Camera& camera, const LightState& light)
{
    Image out(g.width, g.height, 3);
    parallel_rows(g.height, [&](int y) {
        for (int x = 0; x < g.width; ++x) {
            if (!g.foreground(x, y))
                continue;
            const Vec3 p = camera.position + camera.primary_direction(x, y) * g.depth.at(x, y);
            const Vec3 to_light = light.center - p;
            const float dist2 = dot(to_light, to_light);
            const float cos_t = std::max(0.f, dot(g.n(x, y), to_light / std::sqrt(dist2)));
            out.set_rgb(x, y, g.albedo.rgb(x, y) * light.intensity * (cos_t / (kPi * dist2)));
        }
    });
    return out;
}

Image composite(const Image& direct, const Image& shadow, const Image& specular, const GBufferFrame& g,
                const EnvMap& env, const Camera& camera)
{
    if (!direct.same_size(shadow) || !direct.same_size(specular) || direct.width() != g.width ||
        direct.height() != g.height)
        throw Error("composite: input dimensions differ");
    Image out(g.width, g.height, 3);
    parallel_rows(g.height, [&](int y) {
        for (int x = 0; x < g.width; ++x) {
            if (!g.foreground(x, y)) {
                out.set_rgb(x, y, env.empty() ? Vec3{} : env.lookup(camera.primary_direction(x, y)));
                continue;
            }
            const Vec3 c = g.emissive.rgb(x, y) + direct.rgb(x, y) * shadow.at(x, y) + specular.rgb(x, y);
            out.set_rgb(x, y, c);
        }
    });
    return out;
}

Image taa(const Image& curr, const Image* prev_taa, const GBufferFrame& g, const GBufferFrame* prev_g,
          const TaaParams& params)
{
    if (prev_taa == nullptr || prev_g == nullptr)
        return curr;
    if (!prev_taa->same_shape(curr) || curr.width() != g.width || curr.height() != g.height)
        throw Error("taa: input dimensions differ");

    const int w = g.width;
    const int h = g.height;
    const int arity = std::min(curr.channels(), 3);
    Image out = curr;
    const ConsistencyParams consistency{};
    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            temporal::Value hist;
            if (!temporal::reproject_value(*prev_taa, *prev_g, g, x, y, consistency, hist))
                continue;
            temporal::Value nb[9];
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int tx = x + dx;
                    const int ty = y + dy;
                    if (tx < 0 || ty < 0 || tx >= w || ty >= h)
                        continue;
                    temporal::Value v{};
                    for (int c = 0; c < arity; ++c)
                        v[static_cast<std::size_t>(c)] = curr.at(tx, ty, c);
                    nb[n++] = v;
                }
            const auto box = temporal::make_box(std::span<const temporal::Value>(nb, static_cast<std::size_t>(n)),
                                                arity, params.gamma);
            const temporal::Value rect = temporal::rectify_history(hist, box, RectifyMode::Clamp);
            for (int c = 0; c < arity; ++c) {
                const float r = rect[static_cast<std::size_t>(c)];
                out.at(x, y, c) = r + params.blend * (curr.at(x, y, c) - r);
            }
        }
    });
    return out;
}

} // namespace hd::compose
