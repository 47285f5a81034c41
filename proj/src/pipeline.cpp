// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/pipeline.hpp"
#include "hd/metrics.hpp"
#include "hd/scene.hpp"
#include "hd/sequence_io.hpp"
#include "hd/tonemap.hpp"

#include <algorithm>
#include <chrono>

namespace hd {

std::string_view to_string(Pass pass)
{
    switch (pass) {
    case Pass::ReinhardForward: return "reinhard_forward";
    case Pass::Temporal: return "temporal";
    case Pass::Spatial: return "spatial";
    case Pass::ReinhardInverse: return "reinhard_inverse";
    case Pass::ShadeDirect: return "shade_direct";
    case Pass::Composite: return "composite";
    case Pass::Taa: return "taa";
    }
    return "?";
}

std::string describe(const TraceEntry& e)
{
    std::string s = "frame " + std::to_string(e.frame) + ": " + std::string(to_string(e.pass));
    if (e.channel)
        s += " [" + std::string(to_string(*e.channel)) + "]";
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

const Image& require(const Frame& f, std::string_view name)
{
    const auto it = f.find(name);
    if (it == f.end())
        throw Error("frame is missing channel '" + std::string(name) + "'");
    return it->second;
}

std::string prefix(ChannelKind kind)
{
    return kind == ChannelKind::Shadow ? "shadow" : "specular";
}

Image history_len_image(const TemporalHistory& h)
{
    Image out(h.width(), h.height(), 1);
    for (int y = 0; y < h.height(); ++y)
        for (int x = 0; x < h.width(); ++x)
            out.at(x, y) = static_cast<float>(h.len(x, y));
    return out;
}

} // namespace

Denoiser::Denoiser(DenoiseConfig config, ChannelSelection channels, bool capture_intermediates)
    : config_(std::move(config)), channels_(channels), capture_(capture_intermediates)
{
    if (const auto problems = validate(config_); !problems.empty())
        throw Error("invalid config: " + problems.front());
}

temporal::TemporalResult Denoiser::temporal_step(ChannelKind kind, const Image& input, const GBufferFrame& g,
                                                 const ChannelState& state)
{
    const auto t0 = Clock::now();
    std::vector<temporal::RectifyEvent>* events = record_events_ ? &events_ : nullptr;
    const TemporalHistory* prev = state.history ? &*state.history : nullptr;
    const GBufferFrame* prev_g = prev_g_ ? &*prev_g_ : nullptr;
    temporal::TemporalResult tr = temporal::run(input, prev, prev_g, g, config_, events);
    trace_.push_back({frame_index_, Pass::Temporal, kind});
    timings_.push_back({frame_index_, Pass::Temporal, kind, std::chrono::duration<double>(Clock::now() - t0).count()});
    return tr;
}

Image Denoiser::spatial_step(ChannelKind kind, const Image& input, temporal::TemporalResult tr, const GBufferFrame& g,
                             ChannelState& state, Frame* intermediates)
{
    const auto t0 = Clock::now();
    spatial::DenoiseResult sr = spatial::denoise_channel(kind, tr.history.color, tr.variance, g, config_);
    trace_.push_back({frame_index_, Pass::Spatial, kind});
    timings_.push_back({frame_index_, Pass::Spatial, kind, std::chrono::duration<double>(Clock::now() - t0).count()});
    spatial_timings_.push_back({frame_index_, kind, sr.iterations});

    if (intermediates) {
        const std::string p = prefix(kind);
        intermediates->insert_or_assign(p + "_input", input);
        intermediates->insert_or_assign(p + "_temporal", tr.history.color);
        intermediates->insert_or_assign(p + "_variance", tr.variance);
        intermediates->insert_or_assign(p + "_history_len", history_len_image(tr.history));
        intermediates->insert_or_assign(p + "_spatial", sr.channel);
        intermediates->insert_or_assign(p + "_spatial_variance", sr.variance);
    }

    state.history = std::move(tr.history);
    if (config_.feedback == Feedback::FirstIteration && !sr.iterations.empty())
        state.history->color = std::move(sr.feedback);
    return std::move(sr.channel);
}

FrameResult Denoiser::process(const Frame& frame, const FrameContext& ctx)
{
    GBufferFrame g = gbuffer_from(frame);
    const Image& raw_shadow = require(frame, channel::kShadow1spp);
    const Image& raw_specular = require(frame, channel::kSpecular1spp);
    if (prev_g_ && (prev_g_->width != g.width || prev_g_->height != g.height))
        throw Error("frame size changed mid-sequence");

    FrameResult out;
    Frame* inter = capture_ ? &out.intermediates : nullptr;
    auto timed = [&](Pass pass, std::optional<ChannelKind> kind, auto&& fn) {
        const auto t0 = Clock::now();
        fn();
        trace_.push_back({frame_index_, pass, kind});
        timings_.push_back({frame_index_, pass, kind, std::chrono::duration<double>(Clock::now() - t0).count()});
    };

    Image specular_in = raw_specular;
    const bool reinhard = config_.reinhard && channels_.specular;
    if (reinhard)
        timed(Pass::ReinhardForward, ChannelKind::IndirectSpecular,
              [&] { specular_in = tonemap::reinhard_forward(raw_specular, config_.luma_multiplier); });

    std::optional<temporal::TemporalResult> shadow_t;
    std::optional<temporal::TemporalResult> specular_t;
    if (channels_.shadow)
        shadow_t = temporal_step(ChannelKind::Shadow, raw_shadow, g, shadow_);
    if (channels_.specular)
        specular_t = temporal_step(ChannelKind::IndirectSpecular, specular_in, g, specular_);
    out.shadow = shadow_t ? spatial_step(ChannelKind::Shadow, raw_shadow, std::move(*shadow_t), g, shadow_, inter)
                          : raw_shadow;
    out.specular = specular_t ? spatial_step(ChannelKind::IndirectSpecular, specular_in, std::move(*specular_t), g,
                                             specular_, inter)
                              : raw_specular;

    if (reinhard)
        timed(Pass::ReinhardInverse, ChannelKind::IndirectSpecular, [&] {
            out.specular = config_.reinhard_inverse == ReinhardInverse::Exact
                               ? tonemap::reinhard_inverse_exact(out.specular, config_.luma_multiplier)
                               : tonemap::reinhard_inverse_paper(out.specular, config_.reinhard_weight);
        });

    static const EnvMap no_env;
    const EnvMap& env = ctx.env ? *ctx.env : no_env;
    timed(Pass::ShadeDirect, std::nullopt, [&] { out.direct = compose::shade_direct(g, ctx.camera, ctx.light); });
    timed(Pass::Composite, std::nullopt,
          [&] { out.composite = compose::composite(out.direct, out.shadow, out.specular, g, env, ctx.camera); });
    if (config_.taa) {
        timed(Pass::Taa, std::nullopt, [&] {
            out.final = compose::taa(out.composite, prev_final_ ? &*prev_final_ : nullptr, g,
                                     prev_g_ ? &*prev_g_ : nullptr);
        });
    } else {
        out.final = out.composite;
    }

    prev_final_ = out.final;
    prev_g_ = std::move(g);
    ++frame_index_;
    return out;
}

std::vector<FrameContext> frame_contexts(const FrameSequence& seq, const EnvMap& env)
{
    if (!seq.manifest.scene.is_object() || seq.manifest.scene.empty())
        throw Error("sequence manifest has no scene description; camera and light are needed for direct lighting");
    const synth::SceneDescriptor scene = synth::scene_from_json(seq.manifest.scene);
    if (scene.width != seq.manifest.width || scene.height != seq.manifest.height)
        throw Error("scene resolution does not match the sequence");
    std::vector<FrameContext> out;
    for (int f = 0; f < static_cast<int>(seq.frames.size()); ++f)
        out.push_back({synth::camera_at(scene, f), synth::light_at(scene, f), &env});
    return out;
}

PipelineResult run_pipeline(const FrameSequence& seq, const DenoiseConfig& config, const PipelineOptions& options)
{
    check_sequence(seq);
    for (const auto& name : channel::input_channels())
        if (std::find(seq.manifest.channels.begin(), seq.manifest.channels.end(), name) == seq.manifest.channels.end())
            throw Error("sequence lacks input channel '" + name + "'");

    const EnvMap env = seq.env_map.empty() ? EnvMap{} : EnvMap(seq.env_map);
    const std::vector<FrameContext> contexts = frame_contexts(seq, env);
    Denoiser denoiser(config, options.channels, options.dump_intermediates);

    PipelineResult result;
    result.output.manifest = seq.manifest;
    result.output.manifest.extra = {{"source", seq.manifest.extra}, {"config", to_json(config)}};
    result.output.env_map = seq.env_map;

    nlohmann::json frames = nlohmann::json::array();
    double sum_final = 0.0, sum_noisy = 0.0;
    bool have_reference = false;

    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        const Frame& in = seq.frames[f];
        FrameResult r = denoiser.process(in, contexts[f]);

        Frame out;
        for (const auto& name : channel::gbuffer_channels())
            out.emplace(name, in.at(name));
        for (std::string_view ref : {channel::kReference, channel::kReferenceShadow, channel::kReferenceSpecular})
            if (const auto it = in.find(ref); it != in.end())
                out.emplace(std::string(ref), it->second);

        const auto ref = in.find(channel::kReference);
        if (ref != in.end()) {
            have_reference = true;
            const GBufferFrame g = gbuffer_from(in);
            const Image noisy = compose::composite(r.direct, in.at(std::string(channel::kShadow1spp)),
                                                   in.at(std::string(channel::kSpecular1spp)), g, env,
                                                   contexts[f].camera);
            nlohmann::json row = {{"frame", f},
                                  {"ssim_final", metrics::ssim(r.final, ref->second)},
                                  {"ssim_composite", metrics::ssim(r.composite, ref->second)},
                                  {"ssim_noisy", metrics::ssim(noisy, ref->second)},
                                  {"mse_final", metrics::mse(r.final, ref->second)},
                                  {"mse_noisy", metrics::mse(noisy, ref->second)}};
            if (const auto rs = in.find(channel::kReferenceShadow); rs != in.end()) {
                row["ssim_shadow"] = metrics::ssim(r.shadow, rs->second);
                row["mse_shadow"] = metrics::mse(r.shadow, rs->second);
            }
            if (const auto rs = in.find(channel::kReferenceSpecular); rs != in.end()) {
                row["ssim_specular"] = metrics::ssim(r.specular, rs->second);
                row["mse_specular"] = metrics::mse(r.specular, rs->second);
            }
            sum_final += row["ssim_final"].get<double>();
            sum_noisy += row["ssim_noisy"].get<double>();
            frames.push_back(std::move(row));
            if (options.dump_intermediates)
                out.emplace(std::string(output::kNoisy), noisy);
        }

        out.emplace(std::string(output::kShadow), std::move(r.shadow));
        out.emplace(std::string(output::kSpecular), std::move(r.specular));
        out.emplace(std::string(output::kDirect), std::move(r.direct));
        out.emplace(std::string(output::kComposite), std::move(r.composite));
        out.emplace(std::string(output::kFinal), std::move(r.final));
        for (auto& [name, img] : r.intermediates)
            out.emplace(name, std::move(img));
        result.output.frames.push_back(std::move(out));
    }

    result.output.manifest.channels.clear();
    if (!result.output.frames.empty())
        for (const auto& [name, img] : result.output.frames.front())
            result.output.manifest.channels.push_back(name);

    if (have_reference) {
        const double n = static_cast<double>(frames.size());
        result.report = {{"frames", frames},
                         {"mean_ssim_final", sum_final / n},
                         {"mean_ssim_noisy", sum_noisy / n}};
    }
    result.trace = denoiser.trace();
    result.timings = denoiser.timings();
    result.spatial_timings = denoiser.spatial_timings();
    return result;
}

} // namespace hd
