// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/image.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hd {

enum class ChannelKind { Shadow, IndirectSpecular };

std::string_view to_string(ChannelKind kind);

/// Per-pixel geometric attributes from the primary visibility pass.
///
/// Background pixels (object_id 0) carry depth = +inf and zero elsewhere.
/// Motion is stored as a three-channel image (z unused) so it maps directly
/// onto a colour PFM; it points from the current pixel centre to the
/// position of the same surface point in the previous frame, in pixels.
struct GBufferFrame {
    int width = 0;
    int height = 0;
    Image depth;        // 1 ch, distance from the camera along the primary ray
    Image normal;       // 3 ch, world space
    Image motion;       // 3 ch (x, y, 0)
    Image object_id;    // 1 ch, integral values stored as float
    Image albedo;       // 3 ch
    Image roughness;    // 1 ch
    Image emissive;     // 3 ch
    Image shadow_angle; // 1 ch, degrees, constant per frame

    static GBufferFrame allocate(int width, int height);

    int id(int x, int y) const { return static_cast<int>(object_id.at(x, y)); }
    bool foreground(int x, int y) const { return object_id.at(x, y) != 0.f; }
    Vec3 n(int x, int y) const { return normal.rgb(x, y); }
    Vec2 mv(int x, int y) const { return {motion.at(x, y, 0), motion.at(x, y, 1)}; }
};

struct NoisyChannel {
    ChannelKind kind = ChannelKind::Shadow;
    Image data; // 1 ch for Shadow, 3 ch for IndirectSpecular
    int spp = 1;
};

/// Temporally accumulated state for one channel.
struct TemporalHistory {
    Image color;
    Image moment1;
    Image moment2;
    std::vector<std::int32_t> history_len;

    static TemporalHistory allocate(int width, int height, int channels);

    int width() const { return color.width(); }
    int height() const { return color.height(); }
    std::int32_t& len(int x, int y) { return history_len[static_cast<std::size_t>(y) * width() + x]; }
    std::int32_t len(int x, int y) const { return history_len[static_cast<std::size_t>(y) * width() + x]; }
};

/// One frame of a sequence: named channel images.
using Frame = std::map<std::string, Image, std::less<>>;

struct Manifest {
    int format_version = 1;
    int width = 0;
    int height = 0;
    std::vector<std::string> channels;
    nlohmann::json scene = nlohmann::json::object();
    std::uint64_t seed = 0;
    // Free-form producer metadata (spp, render flags, denoise config, ...).
    nlohmann::json extra = nlohmann::json::object();
};

struct FrameSequence {
    Manifest manifest;
    std::vector<Frame> frames;
    // Source latitude-longitude environment map; empty when not applicable.
    Image env_map;
};

namespace channel {
inline constexpr std::string_view kDepth = "depth";
inline constexpr std::string_view kNormal = "normal";
inline constexpr std::string_view kMotion = "motion";
inline constexpr std::string_view kObjectId = "object_id";
inline constexpr std::string_view kAlbedo = "albedo";
inline constexpr std::string_view kRoughness = "roughness";
inline constexpr std::string_view kEmissive = "emissive";
inline constexpr std::string_view kShadowAngle = "shadow_angle";
inline constexpr std::string_view kShadow1spp = "shadow_1spp";
inline constexpr std::string_view kSpecular1spp = "specular_1spp";
inline constexpr std::string_view kReference = "reference";
inline constexpr std::string_view kReferenceShadow = "reference_shadow";
inline constexpr std::string_view kReferenceSpecular = "reference_specular";

// The G-buffer channel set, in file order.
const std::vector<std::string>& gbuffer_channels();
// G-buffer plus both 1spp inputs.
const std::vector<std::string>& input_channels();
int expected_channel_count(std::string_view name); // 0 if the name is not a known channel
} // namespace channel

GBufferFrame gbuffer_from(const Frame& frame);
void store_gbuffer(Frame& frame, const GBufferFrame& g);

struct Violation {
    std::string channel;
    int x = -1; // -1 when the violation is not tied to a pixel
    int y = -1;
    std::string message;
};

std::string describe(const Violation& v);

/// Checks every type invariant that applies to the channels present in
/// the frame. Never throws.
std::vector<Violation> validate_frame(const Frame& frame);
std::vector<Violation> validate_gbuffer(const GBufferFrame& g);

} // namespace hd
