// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/compose.hpp"
#include "hd/config.hpp"
#include "hd/env_map.hpp"
#include "hd/frame.hpp"
#include "hd/spatial.hpp"
#include "hd/temporal.hpp"
#include "hd/view.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hd {

// Output channel names written by the pipeline.
namespace output {
inline constexpr std::string_view kShadow = "shadow";       // denoised shadow
inline constexpr std::string_view kSpecular = "specular";   // denoised specular
inline constexpr std::string_view kDirect = "direct";       // unshadowed direct light
inline constexpr std::string_view kComposite = "composite"; // before TAA
inline constexpr std::string_view kFinal = "final";         // after TAA
inline constexpr std::string_view kNoisy = "noisy";         // composite of the raw 1spp inputs
} // namespace output

struct ChannelSelection {
    bool shadow = true;
    bool specular = true;

    bool selected(ChannelKind kind) const { return kind == ChannelKind::Shadow ? shadow : specular; }
};

enum class Pass { ReinhardForward, Temporal, Spatial, ReinhardInverse, ShadeDirect, Composite, Taa };

std::string_view to_string(Pass pass);

struct TraceEntry {
    int frame = 0;
    Pass pass = Pass::Temporal;
    std::optional<ChannelKind> channel;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

std::string describe(const TraceEntry& e);

struct PassTiming {
    int frame = 0;
    Pass pass = Pass::Temporal;
    std::optional<ChannelKind> channel;
    double seconds = 0.0;
};

struct SpatialTiming {
    int frame = 0;
    ChannelKind channel = ChannelKind::Shadow;
    std::vector<spatial::IterationRecord> iterations;
};

/// Per-frame scene state the composition stages need.
struct FrameContext {
    Camera camera;
    LightState light;
    const EnvMap* env = nullptr;
};

struct FrameResult {
    Image shadow;   // denoised (or raw when not selected)
    Image specular;
    Image direct;
    Image composite;
    Image final;
    Frame intermediates; // filled when intermediate capture is on
};

/// Stateful per-frame denoiser; frames must be fed in order.
class Denoiser {
public:
    Denoiser(DenoiseConfig config, ChannelSelection channels = {}, bool capture_intermediates = false);

    FrameResult process(const Frame& frame, const FrameContext& ctx);

    const DenoiseConfig& config() const { return config_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    const std::vector<PassTiming>& timings() const { return timings_; }
    const std::vector<SpatialTiming>& spatial_timings() const { return spatial_timings_; }
    const std::vector<temporal::RectifyEvent>& rectify_events() const { return events_; }

    // Keep every rectification of the following frames (memory heavy).
    void record_rectify_events(bool on) { record_events_ = on; }

private:
    struct ChannelState {
        std::optional<TemporalHistory> history;
    };

    temporal::TemporalResult temporal_step(ChannelKind kind, const Image& input, const GBufferFrame& g,
                                           const ChannelState& state);
    Image spatial_step(ChannelKind kind, const Image& input, temporal::TemporalResult tr, const GBufferFrame& g,
                       ChannelState& state, Frame* intermediates);

    DenoiseConfig config_;
    ChannelSelection channels_;
    bool capture_ = false;
    bool record_events_ = false;
    int frame_index_ = 0;
    std::optional<GBufferFrame> prev_g_;
    std::optional<Image> prev_final_;
    ChannelState shadow_;
    ChannelState specular_;
    std::vector<TraceEntry> trace_;
    std::vector<PassTiming> timings_;
    std::vector<SpatialTiming> spatial_timings_;
    std::vector<temporal::RectifyEvent> events_;
};

struct PipelineOptions {
    ChannelSelection channels;
    bool dump_intermediates = false;
};

struct PipelineResult {
    FrameSequence output;
    // Quality numbers per frame; empty unless the input carries references.
    nlohmann::json report;
    std::vector<TraceEntry> trace;
    std::vector<PassTiming> timings;
    std::vector<SpatialTiming> spatial_timings;
};

// Camera, light and environment for every frame of a synthesized sequence.
std::vector<FrameContext> frame_contexts(const FrameSequence& seq, const EnvMap& env);

PipelineResult run_pipeline(const FrameSequence& seq, const DenoiseConfig& config, const PipelineOptions& options = {});

} // namespace hd
