// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/frame.hpp"
#include "hd/scene.hpp"

#include <cstdint>

namespace hd::synth {

inline constexpr int kReferenceSpp = 1024;

// Reference renders draw from a stream disjoint from the 1spp inputs:
// sample k of render_reference(seed) is sample 0 of a 1spp render with
// seed reference_seed(seed) + k.
inline constexpr std::uint64_t kReferenceSeedOffset = 0x100000000ull;
constexpr std::uint64_t reference_seed(std::uint64_t seed) { return seed + kReferenceSeedOffset; }

struct RenderedFrame {
    GBufferFrame gbuffer;
    NoisyChannel shadow;
    NoisyChannel specular;
};

struct ReferenceFrame {
    Image shadow;
    Image specular;
    Image composite;
};

/// Deterministic mini path tracer standing in for the rasterised G-buffer
/// and the shadow / indirect specular ray tracers.
///
/// Per-pixel random streams are keyed by (seed + sample, frame, x, y), so
/// results do not depend on scheduling or worker count.
class Renderer {
public:
    explicit Renderer(SceneDescriptor scene);

    const SceneDescriptor& scene() const { return scene_; }
    const EnvMap& env() const { return env_; }
    const PrefilteredEnvMap& prefiltered() const { return prefiltered_; }

    RenderedFrame render_frame(int frame, int spp, std::uint64_t seed, bool ibl_secondary) const;
    ReferenceFrame render_reference(int frame, std::uint64_t seed, bool ibl_secondary) const;

private:
    SceneDescriptor scene_;
    EnvMap env_;
    PrefilteredEnvMap prefiltered_;
};

RenderedFrame render_frame(const SceneDescriptor& scene, int frame, int spp, std::uint64_t seed,
                           bool ibl_secondary);
ReferenceFrame render_reference(const SceneDescriptor& scene, int frame, std::uint64_t seed,
                                bool ibl_secondary);

/// Adds `magnitude` to every component of a pseudo-random subset of pixels
/// (each selected independently with probability `rate`).
Image inject_fireflies(const Image& channel, float rate, float magnitude, std::uint64_t seed);

struct SynthOptions {
    int spp = 1;
    std::uint64_t seed = 0;
    bool ibl_secondary = false;
    bool reference = false;
    float firefly_rate = 0.f;
    float firefly_magnitude = 0.f;
};

FrameSequence synthesize(const SceneDescriptor& scene, const SynthOptions& options);

} // namespace hd::synth
