// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/spatial.hpp"
#include "hd/parallel.hpp"

#include <atomic>
#include <chrono>

namespace hd::spatial {

float edge_weight(const EdgeAttrs& c, const EdgeAttrs& t, float centre_variance, float step_distance,
                  const EdgeParams& p)
{
    const float wz = std::exp(-std::abs(c.depth - t.depth) / (p.sigma_z * std::abs(c.depth) * step_distance + p.epsilon));
    const float wn = std::pow(std::max(0.f, dot(c.normal, t.normal)), p.sigma_n);
    const float wl = std::exp(-std::abs(c.luma - t.luma) / (p.sigma_l * std::sqrt(std::max(centre_variance, 0.f)) + p.epsilon));
    return wz * wn * wl;
}

namespace {

using Clock = std::chrono::steady_clock;

EdgeAttrs attrs(const GBufferFrame& g, const Image& luma, int x, int y)
{
    return {g.depth.at(x, y), g.n(x, y), luma.at(x, y)};
}

void check_inputs(const Image& channel, const Image& variance, const GBufferFrame& g, std::size_t levels)
{
    if (channel.width() != g.width || channel.height() != g.height || !variance.same_size(channel) ||
        variance.channels() != 1)
        throw Error("a-trous: channel, variance and G-buffer dimensions differ");
    if (levels != channel.pixel_count())
        throw Error("a-trous: level map size mismatch");
}

// Accumulates weighted taps for one output pixel.
struct Accum {
    double sum[3] = {0.0, 0.0, 0.0};
    double wsum = 0.0;
    double var = 0.0;

    void add(const Image& ch, const Image* variance, int x, int y, double w)
    {
        for (int c = 0; c < ch.channels(); ++c)
            sum[c] += w * ch.at(x, y, c);
        if (variance)
            var += w * w * variance->at(x, y);
        wsum += w;
    }
};

AtrousResult dense_impl(const Image& channel, const Image& variance, const GBufferFrame& g,
                        std::span<const std::int8_t> levels, const EdgeParams& params)
{
    check_inputs(channel, variance, g, levels.size());
    const auto t0 = Clock::now();
    const int w = g.width;
    const int h = g.height;
    const Image luma = luminance_image(channel);
    AtrousResult out{channel, variance, {}};
    std::atomic<std::uint64_t> taps{0};

    parallel_rows(h, [&](int y) {
        std::uint64_t row_taps = 0;
        for (int x = 0; x < w; ++x) {
            const int level = levels[static_cast<std::size_t>(y) * w + x];
            if (level < 0 || !g.foreground(x, y))
                continue;
            const int step = 1 << level;
            const EdgeAttrs ca = attrs(g, luma, x, y);
            const float cvar = variance.at(x, y);
            Accum acc;
            for (int j = 0; j < 5; ++j)
                for (int i = 0; i < 5; ++i) {
                    ++row_taps;
                    const int dx = (i - 2) * step;
                    const int dy = (j - 2) * step;
                    const int tx = std::clamp(x + dx, 0, w - 1);
                    const int ty = std::clamp(y + dy, 0, h - 1);
                    const float k = AtrousKernel::weight_2d(i, j);
                    if (i == 2 && j == 2) {
                        acc.add(channel, &variance, x, y, k);
                        continue;
                    }
                    if (!g.foreground(tx, ty))
                        continue;
                    const float dist = std::sqrt(static_cast<float>(dx * dx + dy * dy));
                    const float wt = k * edge_weight(ca, attrs(g, luma, tx, ty), cvar, dist, params);
                    if (wt > 0.f)
                        acc.add(channel, &variance, tx, ty, wt);
                }
            for (int c = 0; c < channel.channels(); ++c)
                out.channel.at(x, y, c) = static_cast<float>(acc.sum[c] / acc.wsum);
            out.variance.at(x, y) = static_cast<float>(acc.var / (acc.wsum * acc.wsum));
        }
        taps += row_taps;
    });

    out.stats.taps = taps.load();
    out.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

// One 5-tap pass along x (vertical == false) or y. Variance is only
// filtered when `update_variance` is set.
void separable_pass(const Image& src, const Image& variance, const GBufferFrame& g, std::span<const std::int8_t> levels,
                    const EdgeParams& params, bool vertical, bool update_variance, Image& dst, Image& dst_var,
                    std::atomic<std::uint64_t>& taps)
{
    const int w = g.width;
    const int h = g.height;
    const Image luma = luminance_image(src);
    parallel_rows(h, [&](int y) {
        std::uint64_t row_taps = 0;
        for (int x = 0; x < w; ++x) {
            const int level = levels[static_cast<std::size_t>(y) * w + x];
            if (level < 0 || !g.foreground(x, y))
                continue;
            const int step = 1 << level;
            const EdgeAttrs ca = attrs(g, luma, x, y);
            const float cvar = variance.at(x, y);
            Accum acc;
            for (int i = 0; i < 5; ++i) {
                ++row_taps;
                const int d = (i - 2) * step;
                const int tx = vertical ? x : std::clamp(x + d, 0, w - 1);
                const int ty = vertical ? std::clamp(y + d, 0, h - 1) : y;
                const float k = AtrousKernel::weights_1d[static_cast<std::size_t>(i)];
                const Image* v = update_variance ? &variance : nullptr;
                if (i == 2) {
                    acc.add(src, v, x, y, k);
                    continue;
                }
                if (!g.foreground(tx, ty))
                    continue;
                const float wt = k * edge_weight(ca, attrs(g, luma, tx, ty), cvar, static_cast<float>(std::abs(d)), params);
                if (wt > 0.f)
                    acc.add(src, v, tx, ty, wt);
            }
            for (int c = 0; c < src.channels(); ++c)
                dst.at(x, y, c) = static_cast<float>(acc.sum[c] / acc.wsum);
            if (update_variance)
                dst_var.at(x, y) = static_cast<float>(acc.var / (acc.wsum * acc.wsum));
        }
        taps += row_taps;
    });
}

AtrousResult separable_impl(const Image& channel, const Image& variance, const GBufferFrame& g,
                            std::span<const std::int8_t> levels, const EdgeParams& params)
{
    check_inputs(channel, variance, g, levels.size());
    const auto t0 = Clock::now();
    std::atomic<std::uint64_t> taps{0};

    Image horizontal = channel;
    Image unused;
    separable_pass(channel, variance, g, levels, params, false, false, horizontal, unused, taps);

    AtrousResult out{horizontal, variance, {}};
    separable_pass(horizontal, variance, g, levels, params, true, true, out.channel, out.variance, taps);

    out.stats.taps = taps.load();
    out.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

std::vector<std::int8_t> uniform_levels(const Image& channel, int level)
{
    return std::vector<std::int8_t>(channel.pixel_count(), static_cast<std::int8_t>(level));
}

} // namespace

AtrousResult atrous_dense(const Image& channel, const Image& variance, const GBufferFrame& g, int level,
                          const EdgeParams& params)
{
    return dense_impl(channel, variance, g, uniform_levels(channel, level), params);
}

AtrousResult atrous_separable(const Image& channel, const Image& variance, const GBufferFrame& g, int level,
                              const EdgeParams& params)
{
    return separable_impl(channel, variance, g, uniform_levels(channel, level), params);
}

AtrousResult atrous_dense(const Image& channel, const Image& variance, const GBufferFrame& g,
                          std::span<const std::int8_t> levels, const EdgeParams& params)
{
    return dense_impl(channel, variance, g, levels, params);
}

AtrousResult atrous_separable(const Image& channel, const Image& variance, const GBufferFrame& g,
                              std::span<const std::int8_t> levels, const EdgeParams& params)
{
    return separable_impl(channel, variance, g, levels, params);
}

int select_start_level(ChannelKind kind, float roughness_or_angle, const DenoiseConfig& config)
{
    if (!config.adaptive_start)
        return 0;
    const float threshold =
        kind == ChannelKind::IndirectSpecular ? config.roughness_start_threshold : config.shadow_angle_start_threshold;
    return roughness_or_angle > threshold ? 1 : 0;
}

int select_iteration_count(float roughness, bool ibl_adaptive, int default_iterations)
{
    if (!ibl_adaptive)
        return default_iterations;
    if (roughness <= 0.0f)
        return 0;
    if (roughness <= 0.05f)
        return 1;
    return 4;
}

DenoiseResult denoise_channel(ChannelKind kind, const Image& channel, const Image& variance, const GBufferFrame& g,
                              const DenoiseConfig& config)
{
    const int w = g.width;
    const int h = g.height;
    if (channel.width() != w || channel.height() != h)
        throw Error("denoise_channel: channel and G-buffer dimensions differ");

    std::vector<std::int8_t> start(channel.pixel_count(), 0);
    std::vector<std::int8_t> count(channel.pixel_count(), 0);
    int max_count = 0;
    int max_level = -1;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!g.foreground(x, y))
                continue;
            const auto i = static_cast<std::size_t>(y) * w + x;
            const bool spec = kind == ChannelKind::IndirectSpecular;
            const float rough = g.roughness.at(x, y);
            const int s = select_start_level(kind, spec ? rough : g.shadow_angle.at(x, y), config);
            const int n = spec ? select_iteration_count(rough, config.ibl_adaptive_iterations, config.iterations)
                               : config.iterations;
            start[i] = static_cast<std::int8_t>(s);
            count[i] = static_cast<std::int8_t>(n);
            max_count = std::max(max_count, n);
            if (n > 0)
                max_level = std::max(max_level, s + n - 1);
        }
    if (max_level >= 0 && 2 * (1 << max_level) >= std::min(w, h))
        throw Error("a-trous level " + std::to_string(max_level) + " too large for a " + std::to_string(w) + "x" +
                    std::to_string(h) + " image");

    const EdgeParams params = EdgeParams::from(config);
    DenoiseResult out{channel, variance, channel, {}};
    std::vector<std::int8_t> levels(channel.pixel_count());
    for (int it = 0; it < max_count; ++it) {
        IterationRecord rec;
        rec.iteration = it;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            levels[i] = it < count[i] ? static_cast<std::int8_t>(start[i] + it) : std::int8_t{-1};
            const int lv = levels[i];
            const int x = static_cast<int>(i % static_cast<std::size_t>(w));
            const int y = static_cast<int>(i / static_cast<std::size_t>(w));
            if (lv < 0 || !g.foreground(x, y))
                continue;
            rec.min_level = rec.min_level < 0 ? lv : std::min(rec.min_level, lv);
            rec.max_level = std::max(rec.max_level, lv);
            ++rec.filtered_pixels;
        }
        AtrousResult r = config.separable ? atrous_separable(out.channel, out.variance, g, levels, params)
                                          : atrous_dense(out.channel, out.variance, g, levels, params);
        rec.stats = r.stats;
        out.channel = std::move(r.channel);
        out.variance = std::move(r.variance);
        if (it == 0)
            out.feedback = out.channel;
        out.iterations.push_back(rec);
    }
    return out;
}

} // namespace hd::spatial
