// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/temporal.hpp"
#include "hd/parallel.hpp"

namespace hd::temporal {

namespace {

float value_luma(const Value& v, int arity)
{
    return arity == 1 ? v[0] : luminance({v[0], v[1], v[2]});
}

Value load(const Image& img, int x, int y)
{
    Value v{};
    for (int c = 0; c < img.channels() && c < 3; ++c)
        v[static_cast<std::size_t>(c)] = img.at(x, y, c);
    return v;
}

struct Footprint {
    int x[4];
    int y[4];
    float w[4];
};

// Returns false when centre + motion falls outside the previous frame.
bool footprint(const GBufferFrame& curr_g, int x, int y, int width, int height, Footprint& fp)
{
    const Vec2 m = curr_g.mv(x, y);
    const float px = static_cast<float>(x) + 0.5f + m.x;
    const float py = static_cast<float>(y) + 0.5f + m.y;
    if (!(px >= 0.f && py >= 0.f && px < static_cast<float>(width) && py < static_cast<float>(height)))
        return false;
    const float fx = px - 0.5f;
    const float fy = py - 0.5f;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const float tx = fx - static_cast<float>(x0);
    const float ty = fy - static_cast<float>(y0);
    const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
    const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
    const float ws[4] = {(1.f - tx) * (1.f - ty), tx * (1.f - ty), (1.f - tx) * ty, tx * ty};
    for (int i = 0; i < 4; ++i) {
        fp.x[i] = xs[i];
        fp.y[i] = ys[i];
        fp.w[i] = ws[i];
    }
    return true;
}

bool in_bounds(int x, int y, int w, int h) { return x >= 0 && y >= 0 && x < w && y < h; }

} // namespace

PixelAttrs attrs_at(const GBufferFrame& g, int x, int y)
{
    return {g.id(x, y), g.depth.at(x, y), g.n(x, y)};
}

bool consistency_test(const PixelAttrs& prev, const PixelAttrs& curr, const ConsistencyParams& params)
{
    if (prev.object_id != curr.object_id)
        return false;
    const float rel = std::abs(prev.depth - curr.depth) / std::max(curr.depth, 1e-6f);
    if (!(rel < params.max_relative_depth))
        return false;
    return dot(prev.normal, curr.normal) > params.min_normal_dot;
}

ReprojectionTap reproject_tap(const TemporalHistory& prev, const GBufferFrame& prev_g, const GBufferFrame& curr_g,
                              int x, int y, const ConsistencyParams& params)
{
    ReprojectionTap tap;
    const int w = prev_g.width;
    const int h = prev_g.height;
    Footprint fp;
    if (!footprint(curr_g, x, y, w, h, fp))
        return tap;

    const PixelAttrs curr = attrs_at(curr_g, x, y);
    const int arity = prev.color.channels();
    double color[3] = {0.0, 0.0, 0.0};
    double m1 = 0.0, m2 = 0.0, len = 0.0, wsum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const int tx = fp.x[i];
        const int ty = fp.y[i];
        if (fp.w[i] <= 0.f || !in_bounds(tx, ty, w, h))
            continue;
        if (prev.len(tx, ty) <= 0 || !consistency_test(attrs_at(prev_g, tx, ty), curr, params))
            continue;
        const double wt = fp.w[i];
        for (int c = 0; c < arity; ++c)
            color[c] += wt * prev.color.at(tx, ty, c);
        m1 += wt * prev.moment1.at(tx, ty);
        m2 += wt * prev.moment2.at(tx, ty);
        len += wt * prev.len(tx, ty);
        wsum += wt;
    }
    if (!(wsum > 0.0))
        return tap;

    tap.valid = true;
    for (int c = 0; c < arity; ++c)
        tap.color[static_cast<std::size_t>(c)] = static_cast<float>(color[c] / wsum);
    tap.moment1 = static_cast<float>(m1 / wsum);
    tap.moment2 = static_cast<float>(m2 / wsum);
    tap.history_len = std::max(1, static_cast<int>(std::floor(len / wsum)));
    return tap;
}

bool reproject_value(const Image& prev, const GBufferFrame& prev_g, const GBufferFrame& curr_g, int x, int y,
                     const ConsistencyParams& params, Value& out)
{
    const int w = prev_g.width;
    const int h = prev_g.height;
    Footprint fp;
    if (!footprint(curr_g, x, y, w, h, fp))
        return false;
    const PixelAttrs curr = attrs_at(curr_g, x, y);
    double acc[3] = {0.0, 0.0, 0.0};
    double wsum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const int tx = fp.x[i];
        const int ty = fp.y[i];
        if (fp.w[i] <= 0.f || !in_bounds(tx, ty, w, h))
            continue;
        const PixelAttrs pa = attrs_at(prev_g, tx, ty);
        const bool ok = curr.object_id == 0 ? pa.object_id == 0 : consistency_test(pa, curr, params);
        if (!ok)
            continue;
        for (int c = 0; c < prev.channels() && c < 3; ++c)
            acc[c] += fp.w[i] * static_cast<double>(prev.at(tx, ty, c));
        wsum += fp.w[i];
    }
    if (!(wsum > 0.0))
        return false;
    out = {};
    for (int c = 0; c < prev.channels() && c < 3; ++c)
        out[static_cast<std::size_t>(c)] = static_cast<float>(acc[c] / wsum);
    return true;
}

HistoryPixel accumulate(const Value& curr_value, int arity, float curr_luma, const ReprojectionTap& tap, float alpha,
                        float moments_alpha, int history_cap)
{
    HistoryPixel out;
    if (!tap.valid) {
        out.color = curr_value;
        out.moment1 = curr_luma;
        out.moment2 = curr_luma * curr_luma;
        out.history_len = 1;
        return out;
    }
    const int n = tap.history_len;
    const float a = std::max(alpha, 1.f / static_cast<float>(n + 1));
    const float am = std::max(moments_alpha, 1.f / static_cast<float>(n + 1));
    for (int c = 0; c < arity; ++c) {
        const auto i = static_cast<std::size_t>(c);
        out.color[i] = tap.color[i] + a * (curr_value[i] - tap.color[i]);
    }
    out.moment1 = tap.moment1 + am * (curr_luma - tap.moment1);
    out.moment2 = tap.moment2 + am * (curr_luma * curr_luma - tap.moment2);
    out.history_len = std::min(n + 1, history_cap);
    return out;
}

float moments_variance(float moment1, float moment2) { return std::max(0.f, moment2 - moment1 * moment1); }

float sample_variance(std::span<const float> lumas)
{
    if (lumas.empty())
        return 0.f;
    double m1 = 0.0, m2 = 0.0;
    for (const float l : lumas) {
        m1 += l;
        m2 += static_cast<double>(l) * l;
    }
    m1 /= static_cast<double>(lumas.size());
    m2 /= static_cast<double>(lumas.size());
    return static_cast<float>(std::max(0.0, m2 - m1 * m1));
}

float estimate_variance(const HistoryPixel& h, const Image& curr_luma, const GBufferFrame& g, int x, int y,
                        int min_history, const ConsistencyParams& params)
{
    if (h.history_len >= min_history)
        return moments_variance(h.moment1, h.moment2);

    const PixelAttrs centre = attrs_at(g, x, y);
    float lumas[49];
    int n = 0;
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx) {
            const int tx = x + dx;
            const int ty = y + dy;
            if (!in_bounds(tx, ty, g.width, g.height))
                continue;
            if (!consistency_test(attrs_at(g, tx, ty), centre, params))
                continue;
            lumas[n++] = curr_luma.at(tx, ty);
        }
    return sample_variance(std::span<const float>(lumas, static_cast<std::size_t>(n)));
}

bool RectificationBox::contains(const Value& v, float tolerance) const
{
    for (int c = 0; c < arity; ++c) {
        const float d = std::abs(v[static_cast<std::size_t>(c)] - mean[static_cast<std::size_t>(c)]);
        if (d > gamma * stddev[static_cast<std::size_t>(c)] + tolerance)
            return false;
    }
    return true;
}

RectificationBox make_box(std::span<const Value> neighborhood, int arity, float gamma)
{
    RectificationBox box;
    box.gamma = gamma;
    box.arity = arity;
    if (neighborhood.empty())
        return box;
    const double n = static_cast<double>(neighborhood.size());
    for (int c = 0; c < arity; ++c) {
        const auto i = static_cast<std::size_t>(c);
        double mean = 0.0;
        for (const auto& v : neighborhood)
            mean += v[i];
        mean /= n;
        double var = 0.0;
        for (const auto& v : neighborhood) {
            const double d = v[i] - mean;
            var += d * d;
        }
        box.mean[i] = static_cast<float>(mean);
        box.stddev[i] = static_cast<float>(std::sqrt(var / n));
    }
    return box;
}

Value rectify_history(const Value& tap_color, const RectificationBox& box, RectifyMode mode)
{
    if (mode == RectifyMode::Off)
        return tap_color;
    Value out = tap_color;
    if (mode == RectifyMode::Clamp) {
        for (int c = 0; c < box.arity; ++c)
            out[static_cast<std::size_t>(c)] = std::clamp(tap_color[static_cast<std::size_t>(c)], box.lo(c), box.hi(c));
        return out;
    }

    float scale = 1.f;
    for (int c = 0; c < box.arity; ++c) {
        const auto i = static_cast<std::size_t>(c);
        const float dev = std::abs(tap_color[i] - box.mean[i]);
        const float half = box.gamma * box.stddev[i];
        if (dev > half)
            scale = std::min(scale, half / dev);
    }
    if (scale >= 1.f)
        return tap_color;
    for (int c = 0; c < box.arity; ++c) {
        const auto i = static_cast<std::size_t>(c);
        const float v = box.mean[i] + (tap_color[i] - box.mean[i]) * scale;
        // Absorbs the last ulp of the segment/box intersection.
        out[i] = std::clamp(v, box.lo(c), box.hi(c));
    }
    return out;
}

Value rectify_history(const Value& tap_color, std::span<const Value> neighborhood, int arity, float gamma,
                      RectifyMode mode)
{
    return rectify_history(tap_color, make_box(neighborhood, arity, gamma), mode);
}

void rectify_moments(ReprojectionTap& tap, float rectified_luma)
{
    tap.moment1 = 0.5f * tap.moment1 + 0.5f * rectified_luma;
    tap.moment2 = 0.5f * tap.moment2 + 0.5f * rectified_luma * rectified_luma;
}

TemporalResult run(const Image& current, const TemporalHistory* prev, const GBufferFrame* prev_g,
                   const GBufferFrame& g, const DenoiseConfig& config, std::vector<RectifyEvent>* events)
{
    const int w = g.width;
    const int h = g.height;
    const int arity = current.channels();
    if (current.width() != w || current.height() != h)
        throw Error("temporal: channel and G-buffer dimensions differ");
    const bool have_prev = prev != nullptr && prev_g != nullptr;
    if (have_prev && (prev->width() != w || prev->height() != h || prev->color.channels() != arity ||
                      prev_g->width != w || prev_g->height != h))
        throw Error("temporal: previous frame state does not match the current frame");

    TemporalResult out{TemporalHistory::allocate(w, h, arity), Image(w, h, 1)};
    const Image luma = luminance_image(current);
    std::vector<std::vector<RectifyEvent>> row_events(events ? static_cast<std::size_t>(h) : 0);

    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            if (!g.foreground(x, y)) {
                // No history on the sky; keep the current value so the channel stays displayable.
                for (int c = 0; c < arity; ++c)
                    out.history.color.at(x, y, c) = current.at(x, y, c);
                continue;
            }
            const Value v = load(current, x, y);
            ReprojectionTap tap;
            if (have_prev)
                tap = reproject_tap(*prev, *prev_g, g, x, y, config.consistency);

            if (tap.valid && config.rectify_mode != RectifyMode::Off) {
                Value nb[9];
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int tx = x + dx;
                        const int ty = y + dy;
                        if (in_bounds(tx, ty, w, h) && g.foreground(tx, ty))
                            nb[n++] = load(current, tx, ty);
                    }
                const RectificationBox box =
                    make_box(std::span<const Value>(nb, static_cast<std::size_t>(n)), arity, config.clamp_gamma);
                const Value rect = rectify_history(tap.color, box, config.rectify_mode);
                if (events)
                    row_events[static_cast<std::size_t>(y)].push_back({x, y, tap.color, rect, box});
                if (rect != tap.color) {
                    tap.color = rect;
                    rectify_moments(tap, value_luma(rect, arity));
                }
            }

            const HistoryPixel hp = accumulate(v, arity, luma.at(x, y), tap, config.alpha, config.moments_alpha,
                                               config.history_cap);
            for (int c = 0; c < arity; ++c)
                out.history.color.at(x, y, c) = hp.color[static_cast<std::size_t>(c)];
            out.history.moment1.at(x, y) = hp.moment1;
            out.history.moment2.at(x, y) = hp.moment2;
            out.history.len(x, y) = hp.history_len;
        }
    });

    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            if (!g.foreground(x, y))
                continue;
            HistoryPixel hp;
            hp.moment1 = out.history.moment1.at(x, y);
            hp.moment2 = out.history.moment2.at(x, y);
            hp.history_len = out.history.len(x, y);
            out.variance.at(x, y) = estimate_variance(hp, luma, g, x, y, config.spatial_variance_min_history,
                                                      config.consistency);
        }
    });

    if (events)
        for (auto& row : row_events)
            events->insert(events->end(), row.begin(), row.end());
    return out;
}

} // namespace hd::temporal
