// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/temporal.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hd;
using namespace hd::temporal;

namespace {

TemporalHistory constant_history(int w, int h, int channels, float c, int len = 10)
{
    TemporalHistory t = TemporalHistory::allocate(w, h, channels);
    for (float& v : t.color.data())
        v = c;
    for (float& v : t.moment1.data())
        v = c;
    for (float& v : t.moment2.data())
        v = c * c;
    for (auto& l : t.history_len)
        l = len;
    return t;
}

void set_motion(GBufferFrame& g, float mx, float my)
{
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            g.motion.at(x, y, 0) = mx;
            g.motion.at(x, y, 1) = my;
        }
}

// Independent segment/box oracle: largest t in [0, 1] such that
// mu + t (tap - mu) stays inside [mu - half, mu + half] on every axis.
Value clip_oracle(const Value& tap, const Value& mu, const Value& half, int arity)
{
    double t = 1.0;
    for (int c = 0; c < arity; ++c) {
        const double d = static_cast<double>(tap[c]) - mu[c];
        if (d != 0.0)
            t = std::min(t, static_cast<double>(half[c]) / std::abs(d));
    }
    Value out{};
    for (int c = 0; c < arity; ++c)
        out[c] = static_cast<float>(mu[c] + t * (static_cast<double>(tap[c]) - mu[c]));
    return out;
}

} // namespace

TEST_SUITE("temporal")
{
    TEST_CASE("consistency test")
    {
        const PixelAttrs a{3, 10.f, {0.f, 0.f, 1.f}};
        CHECK(consistency_test(a, a));
        CHECK_FALSE(consistency_test(a, {5, 10.f, {0.f, 0.f, 1.f}}));
        CHECK_FALSE(consistency_test({3, 11.5f, a.normal}, a));
        CHECK(consistency_test({3, 10.9f, a.normal}, a));
        CHECK_FALSE(consistency_test({3, 10.f, normalize(Vec3{0.f, 0.5f, 1.f})}, a)); // dot 0.894
        CHECK(consistency_test({3, 10.f, normalize(Vec3{0.f, 0.4f, 1.f})}, a));       // dot 0.928
        CHECK_FALSE(consistency_test({3, 11.5f, a.normal}, a, {0.1f, 0.9f}));
        CHECK(consistency_test({3, 11.5f, a.normal}, a, {0.2f, 0.9f}));
    }

    TEST_CASE("reprojection")
    {
        GBufferFrame g = test::flat_gbuffer(8, 6);
        const TemporalHistory hist = constant_history(8, 6, 3, 0.6f, 7);

        SUBCASE("zero motion on identical geometry")
        {
            const ReprojectionTap t = reproject_tap(hist, g, g, 3, 2);
            CHECK(t.valid);
            CHECK(t.color[0] == 0.6f);
            CHECK(t.color[2] == 0.6f);
            CHECK(t.history_len == 7);
        }
        SUBCASE("off-screen")
        {
            set_motion(g, 3.f, 0.f);
            const ReprojectionTap t = reproject_tap(hist, g, g, 7, 2);
            CHECK_FALSE(t.valid);
            CHECK(t.color == Value{});
            CHECK(t.moment1 == 0.f);
            CHECK(t.moment2 == 0.f);
            CHECK(t.history_len == 0);
        }
        SUBCASE("half-pixel motion over a constant field")
        {
            set_motion(g, 0.5f, 0.f);
            const ReprojectionTap t = reproject_tap(hist, g, g, 3, 2);
            CHECK(t.valid);
            CHECK(t.color[1] == doctest::Approx(0.6f));
        }
        SUBCASE("bilinear weights renormalise over consistent texels")
        {
            GBufferFrame prev = test::flat_gbuffer(8, 6);
            TemporalHistory h2 = constant_history(8, 6, 1, 0.f, 4);
            h2.color.at(3, 2) = 1.f;
            h2.color.at(4, 2) = 3.f;
            h2.len(4, 2) = 9;
            set_motion(g, 0.25f, 0.f);
            ReprojectionTap t = reproject_tap(h2, prev, g, 3, 2);
            CHECK(t.color[0] == doctest::Approx(0.75f * 1.f + 0.25f * 3.f));
            CHECK(t.history_len == 5); // floor(0.75 * 4 + 0.25 * 9)
            prev.object_id.at(4, 2) = 2.f;
            t = reproject_tap(h2, prev, g, 3, 2);
            CHECK(t.color[0] == doctest::Approx(1.f));
        }
    }

    TEST_CASE("accumulate")
    {
        ReprojectionTap invalid;
        HistoryPixel h = accumulate({0.7f}, 1, 0.7f, invalid, 0.2f, 0.2f);
        CHECK(h.color[0] == 0.7f);
        CHECK(h.moment1 == 0.7f);
        CHECK(h.moment2 == doctest::Approx(0.49f));
        CHECK(h.history_len == 1);

        ReprojectionTap fixed{true, {0.4f, 0.4f, 0.4f}, 0.4f, 0.16f, 12};
        h = accumulate({0.4f, 0.4f, 0.4f}, 3, 0.4f, fixed, 0.2f, 0.2f);
        CHECK(h.color[2] == 0.4f);
        CHECK(h.history_len == 13);

        ReprojectionTap zero{true, {0.f}, 0.f, 0.f, 100};
        h = accumulate({1.f}, 1, 1.f, zero, 0.2f, 0.2f);
        CHECK(h.color[0] == doctest::Approx(0.2f));

        // Young history uses the cumulative mean weight.
        ReprojectionTap young{true, {0.f}, 0.f, 0.f, 1};
        h = accumulate({1.f}, 1, 1.f, young, 0.2f, 0.2f);
        CHECK(h.color[0] == doctest::Approx(0.5f));

        ReprojectionTap old{true, {0.f}, 0.f, 0.f, 256};
        CHECK(accumulate({1.f}, 1, 1.f, old, 0.2f, 0.2f).history_len == 256);
    }

    TEST_CASE("variance estimation")
    {
        const GBufferFrame g = test::flat_gbuffer(9, 9);
        const Image flat(9, 9, 1, 0.3f);
        CHECK(estimate_variance({{0.3f}, 0.3f, 0.09f, 10}, flat, g, 4, 4, 4) == doctest::Approx(0.f).epsilon(1e-6));
        CHECK(estimate_variance({{}, 0.5f, 0.3f, 4}, flat, g, 4, 4, 4) == doctest::Approx(0.05f));

        Image checker(9, 9, 1);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x)
                checker.at(x, y) = static_cast<float>((x + y) % 2);
        // 7x7 window with 25 ones and 24 zeros: variance 25*24/49^2.
        CHECK(estimate_variance({{}, 0.f, 0.f, 1}, checker, g, 4, 4, 4) == doctest::Approx(600.0 / 2401.0));
        CHECK(estimate_variance({{}, 0.f, 0.f, 1}, checker, g, 4, 4, 4) == doctest::Approx(0.25f).epsilon(0.01));

        // Inconsistent neighbours are excluded from the fallback window.
        GBufferFrame g2 = g;
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x)
                if ((x + y) % 2 == 1)
                    g2.object_id.at(x, y) = 2.f;
        CHECK(estimate_variance({{}, 0.f, 0.f, 1}, checker, g2, 4, 4, 4) == 0.f);
        CHECK(moments_variance(0.5f, 0.2f) == 0.f);
    }

    TEST_CASE("rectification examples")
    {
        const RectificationBox unit{{0.f, 0.f, 0.f}, {1.f, 1.f, 1.f}, 1.f, 3};
        for (RectifyMode m : {RectifyMode::Clamp, RectifyMode::Clip}) {
            CHECK(rectify_history({0.5f, -0.2f, 0.9f}, unit, m) == Value{0.5f, -0.2f, 0.9f});
            CHECK(rectify_history({2.f, 0.f, 0.f}, unit, m) == Value{1.f, 0.f, 0.f});
            const std::vector<Value> flat(9, Value{0.3f, 0.3f, 0.3f});
            CHECK(rectify_history({0.8f, 0.1f, 0.3f}, flat, 3, 1.f, m) == Value{0.3f, 0.3f, 0.3f});
        }
        CHECK(rectify_history({2.f, 3.f, 0.f}, unit, RectifyMode::Clamp) == Value{1.f, 1.f, 0.f});
        const Value clipped = rectify_history({2.f, 4.f, 0.f}, unit, RectifyMode::Clip);
        CHECK(clipped[0] == doctest::Approx(0.5f));
        CHECK(clipped[1] == doctest::Approx(1.f));
    }

    TEST_CASE("rectified colour always lies in the box; clip keeps direction")
    {
        std::mt19937 rng(11);
        std::uniform_real_distribution<float> u(-2.f, 2.f);
        std::uniform_real_distribution<float> s(0.f, 1.f);
        for (int trial = 0; trial < 2000; ++trial) {
            const int arity = trial % 2 ? 3 : 1;
            std::vector<Value> nb(static_cast<std::size_t>(4 + trial % 6));
            for (auto& v : nb)
                for (int c = 0; c < arity; ++c)
                    v[c] = s(rng) * (trial % 7 == 0 ? 0.f : 1.f);
            Value tap{};
            for (int c = 0; c < arity; ++c)
                tap[c] = u(rng);
            const float gamma = 0.5f + s(rng);
            const RectificationBox box = make_box(nb, arity, gamma);
            for (int c = 0; c < arity; ++c)
                REQUIRE(box.stddev[c] >= 0.f);
            const Value clamp = rectify_history(tap, box, RectifyMode::Clamp);
            const Value clip = rectify_history(tap, box, RectifyMode::Clip);
            CHECK(box.contains(clamp, 1e-6f));
            CHECK(box.contains(clip, 1e-6f));

            Value half{};
            for (int c = 0; c < arity; ++c)
                half[c] = gamma * box.stddev[c];
            const Value want = clip_oracle(tap, box.mean, half, arity);
            double t = -1.0;
            for (int c = 0; c < arity; ++c) {
                CHECK(clip[c] == doctest::Approx(want[c]).epsilon(1e-5).scale(1.f));
                const double d = static_cast<double>(tap[c]) - box.mean[c];
                if (std::abs(d) > 1e-3) {
                    const double tc = (static_cast<double>(clip[c]) - box.mean[c]) / d;
                    CHECK(tc >= -1e-5);
                    if (t >= 0.0)
                        CHECK(tc == doctest::Approx(t).epsilon(1e-3).scale(1.0));
                    t = tc;
                }
            }
        }
    }

    TEST_CASE("moment rectification blends halfway")
    {
        ReprojectionTap tap{true, {0.f}, 0.4f, 0.3f, 5};
        rectify_moments(tap, 0.2f);
        CHECK(tap.moment1 == doctest::Approx(0.3f));
        CHECK(tap.moment2 == doctest::Approx(0.17f));
        CHECK(tap.history_len == 5); // length survives rectification
    }

    TEST_CASE("run: occlusion resets history, background keeps current value")
    {
        GBufferFrame prev_g = test::flat_gbuffer(10, 8);
        GBufferFrame g = prev_g;
        g.object_id.at(4, 4) = 7.f;
        g.object_id.at(0, 0) = 0.f;
        const TemporalHistory hist = constant_history(10, 8, 1, 0.5f, 20);
        const Image cur = test::random_image(10, 8, 1, 3);
        DenoiseConfig cfg;
        const TemporalResult r = run(cur, &hist, &prev_g, g, cfg);
        CHECK(r.history.len(4, 4) == 1);
        CHECK(r.history.color.at(4, 4) == cur.at(4, 4));
        CHECK(r.history.len(0, 0) == 0);
        CHECK(r.history.color.at(0, 0) == cur.at(0, 0));
        CHECK(r.history.len(6, 2) == 21);
        for (float v : r.variance.data())
            CHECK(v >= 0.f);

        const TemporalResult first = run(cur, nullptr, nullptr, g, cfg);
        CHECK(first.history.len(6, 2) == 1);
        CHECK(bit_equal(first.history.color, cur));
    }

    TEST_CASE("run records rectification events inside their boxes")
    {
        const GBufferFrame g = test::flat_gbuffer(12, 12);
        const TemporalHistory hist = constant_history(12, 12, 3, 2.f, 8);
        const Image cur = test::random_image(12, 12, 3, 5);
        for (RectifyMode m : {RectifyMode::Clamp, RectifyMode::Clip}) {
            DenoiseConfig cfg;
            cfg.rectify_mode = m;
            std::vector<RectifyEvent> ev;
            run(cur, &hist, &g, g, cfg, &ev);
            CHECK(ev.size() == 144);
            for (const auto& e : ev)
                CHECK(e.box.contains(e.rectified, 1e-6f));
        }
        DenoiseConfig off;
        off.rectify_mode = RectifyMode::Off;
        std::vector<RectifyEvent> ev;
        run(cur, &hist, &g, g, off, &ev);
        CHECK(ev.empty());
    }

    TEST_CASE("static accumulation converges to the mean")
    {
        // Cumulative averaging (tiny alpha): after 64 frames the history is
        // the sample mean, within 3 standard errors of the true mean.
        const GBufferFrame g = test::flat_gbuffer(4, 4);
        DenoiseConfig cfg;
        cfg.alpha = 1e-4f;
        cfg.moments_alpha = 1e-4f;
        cfg.rectify_mode = RectifyMode::Off;
        std::mt19937 rng(5);
        std::bernoulli_distribution coin(0.3);
        TemporalHistory hist;
        for (int f = 0; f < 64; ++f) {
            Image cur(4, 4, 1);
            for (float& v : cur.data())
                v = coin(rng) ? 1.f : 0.f;
            TemporalResult r = run(cur, f ? &hist : nullptr, f ? &g : nullptr, g, cfg);
            hist = std::move(r.history);
        }
        const double se = std::sqrt(0.3 * 0.7 / 64.0);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) {
                CHECK(std::abs(hist.color.at(x, y) - 0.3) <= 3.0 * se);
                CHECK(hist.len(x, y) == 64);
            }
    }
}
