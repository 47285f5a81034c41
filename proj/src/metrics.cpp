// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/metrics.hpp"
#include "hd/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace hd::metrics {

float exposure_map(float x)
{
    if (!(x > 0.f))
        return 0.f;
    if (std::isinf(x))
        return 1.f;
    return std::clamp(x / (1.f + x), 0.f, 1.f);
}

Image ssim_plane(const Image& img)
{
    Image out(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = exposure_map(pixel_luminance(img, x, y));
    return out;
}

double ssim_planes(const Image& a, const Image& b)
{
    if (!a.same_shape(b) || a.channels() != 1)
        throw Error("ssim: images must be single-channel planes of equal size");
    if (a.empty())
        throw Error("ssim: empty image");
    const int wx = std::min(kSsimWindow, a.width());
    const int wy = std::min(kSsimWindow, a.height());
    const int nx = a.width() - wx + 1;
    const int ny = a.height() - wy + 1;
    const double n = static_cast<double>(wx) * wy;

    std::vector<double> rows(static_cast<std::size_t>(ny), 0.0);
    parallel_rows(ny, [&](int y0) {
        double row_sum = 0.0;
        for (int x0 = 0; x0 < nx; ++x0) {
            double sa = 0.0, sb = 0.0;
            for (int y = y0; y < y0 + wy; ++y)
                for (int x = x0; x < x0 + wx; ++x) {
                    sa += a.at(x, y);
                    sb += b.at(x, y);
                }
            const double ma = sa / n;
            const double mb = sb / n;
            double vaa = 0.0, vbb = 0.0, vab = 0.0;
            for (int y = y0; y < y0 + wy; ++y)
                for (int x = x0; x < x0 + wx; ++x) {
                    const double da = a.at(x, y) - ma;
                    const double db = b.at(x, y) - mb;
                    vaa += da * da;
                    vbb += db * db;
                    vab += da * db;
                }
            vaa /= n;
            vbb /= n;
            vab /= n;
            row_sum += ((2.0 * ma * mb + kSsimC1) * (2.0 * vab + kSsimC2)) /
                       ((ma * ma + mb * mb + kSsimC1) * (vaa + vbb + kSsimC2));
        }
        rows[static_cast<std::size_t>(y0)] = row_sum;
    });
    return std::accumulate(rows.begin(), rows.end(), 0.0) / (static_cast<double>(nx) * ny);
}

double ssim(const Image& a, const Image& b)
{
    if (!a.same_size(b))
        throw Error("ssim: dimension mismatch");
    return ssim_planes(ssim_plane(a), ssim_plane(b));
}

double mse(const Image& a, const Image& b)
{
    if (!a.same_shape(b))
        throw Error("mse: dimension mismatch");
    const auto da = a.data();
    const auto db = b.data();
    if (da.empty())
        throw Error("mse: empty image");
    double sum = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = static_cast<double>(da[i]) - db[i];
        sum += d * d;
    }
    return sum / static_cast<double>(da.size());
}

TimingSummary summarize(const std::vector<double>& seconds)
{
    TimingSummary s;
    if (seconds.empty())
        return s;
    const auto [lo, hi] = std::minmax_element(seconds.begin(), seconds.end());
    s.min = *lo;
    s.max = *hi;
    s.avg = std::accumulate(seconds.begin(), seconds.end(), 0.0) / static_cast<double>(seconds.size());
    // Guard the ordering against rounding in the mean.
    s.avg = std::clamp(s.avg, s.min, s.max);
    s.samples = static_cast<int>(seconds.size());
    return s;
}

BenchResult bench_pass(const std::function<std::uint64_t()>& pass, int repetitions)
{
    if (repetitions < 3)
        throw Error("bench_pass: at least 3 repetitions required");
    using Clock = std::chrono::steady_clock;
    BenchResult r;
    r.taps = pass(); // warm-up
    for (int i = 0; i < repetitions; ++i) {
        const auto t0 = Clock::now();
        const std::uint64_t taps = pass();
        r.samples.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
        if (taps != r.taps)
            throw Error("bench_pass: tap count changed between repetitions");
    }
    r.seconds = summarize(r.samples);
    return r;
}

nlohmann::json to_json(const Record& r)
{
    return {{"scene", r.scene}, {"stack", r.stack},   {"parameter", r.parameter}, {"value", r.value},
            {"movement", r.movement}, {"frame", r.frame}, {"ssim", r.ssim}, {"mse", r.mse}};
}

nlohmann::json report_json(const std::vector<Record>& records)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const Record& r : records)
        rows.push_back(to_json(r));
    return {{"records", rows}};
}

std::string report_csv(const std::vector<Record>& records)
{
    std::ostringstream os;
    os << "scene,stack,parameter,value,movement,frame,ssim,mse\n";
    char buf[160];
    for (const Record& r : records) {
        std::snprintf(buf, sizeof buf, "%.9g,%s,%d,%.17g,%.17g\n", r.value, r.movement.c_str(), r.frame, r.ssim, r.mse);
        os << r.scene << ',' << r.stack << ',' << r.parameter << ',' << buf;
    }
    return os.str();
}

} // namespace hd::metrics
