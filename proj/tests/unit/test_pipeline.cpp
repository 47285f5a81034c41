// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/parallel.hpp"
#include "hd/pipeline.hpp"
#include "hd/render.hpp"
#include "hd/tonemap.hpp"

#include <doctest.h>

using namespace hd;

namespace {

FrameSequence small_sequence(int frames, bool reference, synth::Movement m = synth::Movement::Camera)
{
    synth::SceneDescriptor s = synth::scene_preset("shadow-objects", m, frames);
    s.width = 48;
    s.height = 40;
    synth::SynthOptions opt;
    opt.seed = 3;
    opt.reference = reference;
    return synth::synthesize(s, opt);
}

} // namespace

TEST_SUITE("pipeline")
{
    TEST_CASE("execution trace follows the pass order")
    {
        const FrameSequence seq = small_sequence(2, false);
        DenoiseConfig cfg = preset("svgf+rectify+adaptive+separable+reinhard");
        const PipelineResult r = run_pipeline(seq, cfg);
        using P = Pass;
        const auto S = ChannelKind::Shadow;
        const auto I = ChannelKind::IndirectSpecular;
        std::vector<TraceEntry> want;
        for (int f = 0; f < 2; ++f) {
            const std::vector<TraceEntry> frame = {{f, P::ReinhardForward, I}, {f, P::Temporal, S},
                                                   {f, P::Temporal, I},        {f, P::Spatial, S},
                                                   {f, P::Spatial, I},         {f, P::ReinhardInverse, I},
                                                   {f, P::ShadeDirect, {}},    {f, P::Composite, {}},
                                                   {f, P::Taa, {}}};
            want.insert(want.end(), frame.begin(), frame.end());
        }
        REQUIRE(r.trace.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CAPTURE(describe(r.trace[i]));
            CHECK(r.trace[i] == want[i]);
        }
        CHECK(describe(want[1]) == "frame 0: temporal [shadow]");

        cfg.reinhard = false;
        cfg.taa = false;
        const PipelineResult plain = run_pipeline(seq, cfg);
        CHECK(plain.trace.size() == 12);
        CHECK(plain.trace.front() == TraceEntry{0, P::Temporal, S});
    }

    TEST_CASE("identity configuration reproduces the raw composite")
    {
        const FrameSequence seq = small_sequence(1, false);
        DenoiseConfig cfg = preset("svgf");
        cfg.iterations = 0;
        cfg.rectify_mode = RectifyMode::Off;
        const PipelineResult r = run_pipeline(seq, cfg);
        const Frame& in = seq.frames[0];
        const Frame& out = r.output.frames[0];
        CHECK(bit_equal(out.at("shadow"), in.at("shadow_1spp")));
        CHECK(bit_equal(out.at("specular"), in.at("specular_1spp")));

        const EnvMap env(seq.env_map);
        const auto ctx = frame_contexts(seq, env);
        const GBufferFrame g = gbuffer_from(in);
        const Image direct = compose::shade_direct(g, ctx[0].camera, ctx[0].light);
        const Image raw = compose::composite(direct, in.at("shadow_1spp"), in.at("specular_1spp"), g, env, ctx[0].camera);
        CHECK(bit_equal(out.at("composite"), raw));
        CHECK(bit_equal(out.at("final"), raw));
    }

    TEST_CASE("runs are deterministic and independent of the worker count")
    {
        const FrameSequence seq = small_sequence(3, false);
        const DenoiseConfig cfg = preset("svgf+rectify+adaptive+separable+reinhard");
        set_worker_count(1);
        const PipelineResult a = run_pipeline(seq, cfg);
        set_worker_count(3);
        const PipelineResult b = run_pipeline(seq, cfg);
        set_worker_count(0);
        const PipelineResult c = run_pipeline(seq, cfg);
        for (std::size_t f = 0; f < 3; ++f)
            for (const auto& [name, img] : a.output.frames[f]) {
                CAPTURE(name);
                CHECK(bit_equal(img, b.output.frames[f].at(name)));
                CHECK(bit_equal(img, c.output.frames[f].at(name)));
            }
    }

    TEST_CASE("every technique stack yields one report")
    {
        const FrameSequence seq = small_sequence(3, true);
        const auto& names = preset_names();
        REQUIRE(names.size() == 5);
        CHECK(names.front() == "svgf");
        CHECK(names.back() == "svgf+rectify+adaptive+separable+reinhard");
        for (const auto& name : names) {
            CAPTURE(name);
            const PipelineResult r = run_pipeline(seq, preset(name));
            REQUIRE(r.report.contains("frames"));
            CHECK(r.report["frames"].size() == 3);
            const double m = r.report["mean_ssim_final"].get<double>();
            CHECK(m > 0.0);
            CHECK(m <= 1.0);
            CHECK(r.report["frames"][0].contains("ssim_shadow"));
        }
    }

    TEST_CASE("channel selection and intermediates")
    {
        const FrameSequence seq = small_sequence(2, false);
        PipelineOptions opt;
        opt.channels.shadow = false;
        opt.dump_intermediates = true;
        const PipelineResult r = run_pipeline(seq, preset("svgf"), opt);
        const Frame& out = r.output.frames[1];
        CHECK(bit_equal(out.at("shadow"), seq.frames[1].at("shadow_1spp")));
        CHECK(out.count("specular_temporal") == 1);
        CHECK(out.count("specular_history_len") == 1);
        CHECK(out.count("shadow_temporal") == 0);
        CHECK(r.report.is_null());
        for (const auto& e : r.trace)
            if (e.channel)
                CHECK(*e.channel == ChannelKind::IndirectSpecular);
        CHECK(r.output.manifest.extra.contains("config"));
    }

    TEST_CASE("no feedback keeps the temporal colour as history")
    {
        const FrameSequence seq = small_sequence(1, false, synth::Movement::Static);
        DenoiseConfig cfg = preset("svgf");
        cfg.feedback = Feedback::None;
        cfg.rectify_mode = RectifyMode::Off;
        cfg.taa = false;
        Denoiser d(cfg, {}, true);
        const EnvMap env(seq.env_map);
        const auto ctx = frame_contexts(seq, env);
        const FrameResult r0 = d.process(seq.frames[0], ctx[0]);
        const FrameResult r1 = d.process(seq.frames[0], ctx[0]);
        // Same input twice, no feedback: history is the raw sample, so the
        // second temporal colour equals the first.
        CHECK(bit_equal(r1.intermediates.at("shadow_temporal"), r0.intermediates.at("shadow_temporal")));
    }

    TEST_CASE("errors")
    {
        FrameSequence seq = small_sequence(1, false);
        DenoiseConfig bad;
        bad.alpha = 0.f;
        CHECK_THROWS_AS(run_pipeline(seq, bad), Error);
        FrameSequence missing = seq;
        missing.frames[0].erase("shadow_1spp");
        std::erase(missing.manifest.channels, "shadow_1spp");
        CHECK_THROWS_AS(run_pipeline(missing, {}), Error);
        FrameSequence noscene = seq;
        noscene.manifest.scene = nlohmann::json::object();
        CHECK_THROWS_AS(run_pipeline(noscene, {}), Error);
        DenoiseConfig big;
        big.iterations = 6; // level 5: 64 >= 40
        CHECK_THROWS_AS(run_pipeline(seq, big), Error);
    }
}
