// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/frame.hpp"

#include <cmath>
#include <sstream>

namespace hd {

std::string_view to_string(ChannelKind kind)
{
    return kind == ChannelKind::Shadow ? "shadow" : "specular";
}

GBufferFrame GBufferFrame::allocate(int width, int height)
{
    GBufferFrame g;
    g.width = width;
    g.height = height;
    g.depth = Image(width, height, 1, INFINITY);
    g.normal = Image(width, height, 3);
    g.motion = Image(width, height, 3);
    g.object_id = Image(width, height, 1);
    g.albedo = Image(width, height, 3);
    g.roughness = Image(width, height, 1);
    g.emissive = Image(width, height, 3);
    g.shadow_angle = Image(width, height, 1);
    return g;
}

TemporalHistory TemporalHistory::allocate(int width, int height, int channels)
{
    TemporalHistory h;
    h.color = Image(width, height, channels);
    h.moment1 = Image(width, height, 1);
    h.moment2 = Image(width, height, 1);
    h.history_len.assign(static_cast<std::size_t>(width) * height, 0);
    return h;
}

namespace channel {

const std::vector<std::string>& gbuffer_channels()
{
    static const std::vector<std::string> names = {
        std::string(kDepth),    std::string(kNormal),    std::string(kMotion),
        std::string(kObjectId), std::string(kAlbedo),    std::string(kRoughness),
        std::string(kEmissive), std::string(kShadowAngle)};
    return names;
}

const std::vector<std::string>& input_channels()
{
    static const std::vector<std::string> names = [] {
        auto n = gbuffer_channels();
        n.emplace_back(kShadow1spp);
        n.emplace_back(kSpecular1spp);
        return n;
    }();
    return names;
}

int expected_channel_count(std::string_view name)
{
    if (name == kDepth || name == kObjectId || name == kRoughness || name == kShadowAngle ||
        name == kShadow1spp || name == kReferenceShadow)
        return 1;
    if (name == kNormal || name == kMotion || name == kAlbedo || name == kEmissive ||
        name == kSpecular1spp || name == kReference || name == kReferenceSpecular)
        return 3;
    return 0;
}

} // namespace channel

namespace {

const Image& require(const Frame& f, std::string_view name)
{
    const auto it = f.find(name);
    if (it == f.end())
        throw Error("missing channel '" + std::string(name) + "'");
    if (const int c = channel::expected_channel_count(name); c != 0 && it->second.channels() != c)
        throw Error("channel '" + std::string(name) + "' has " +
                    std::to_string(it->second.channels()) + " components, expected " +
                    std::to_string(c));
    return it->second;
}

} // namespace

GBufferFrame gbuffer_from(const Frame& frame)
{
    GBufferFrame g;
    g.depth = require(frame, channel::kDepth);
    g.normal = require(frame, channel::kNormal);
    g.motion = require(frame, channel::kMotion);
    g.object_id = require(frame, channel::kObjectId);
    g.albedo = require(frame, channel::kAlbedo);
    g.roughness = require(frame, channel::kRoughness);
    g.emissive = require(frame, channel::kEmissive);
    g.shadow_angle = require(frame, channel::kShadowAngle);
    g.width = g.depth.width();
    g.height = g.depth.height();
    for (const Image* img : {&g.normal, &g.motion, &g.object_id, &g.albedo, &g.roughness,
                             &g.emissive, &g.shadow_angle})
        if (!img->same_size(g.depth))
            throw Error("G-buffer channel dimension mismatch");
    return g;
}

void store_gbuffer(Frame& frame, const GBufferFrame& g)
{
    frame.insert_or_assign(std::string(channel::kDepth), g.depth);
    frame.insert_or_assign(std::string(channel::kNormal), g.normal);
    frame.insert_or_assign(std::string(channel::kMotion), g.motion);
    frame.insert_or_assign(std::string(channel::kObjectId), g.object_id);
    frame.insert_or_assign(std::string(channel::kAlbedo), g.albedo);
    frame.insert_or_assign(std::string(channel::kRoughness), g.roughness);
    frame.insert_or_assign(std::string(channel::kEmissive), g.emissive);
    frame.insert_or_assign(std::string(channel::kShadowAngle), g.shadow_angle);
}

std::string describe(const Violation& v)
{
    std::ostringstream os;
    os << v.channel;
    if (v.x >= 0)
        os << " at (" << v.x << ", " << v.y << ")";
    os << ": " << v.message;
    return os.str();
}

namespace {

class Validator {
public:
    explicit Validator(const Frame& f) : frame_(f) {}

    std::vector<Violation> run()
    {
        if (frame_.empty())
            return out_;
        check_shapes();
        if (!shapes_ok_)
            return out_;
        check_finite();
        check_gbuffer();
        check_noisy();
        return out_;
    }

private:
    void add(std::string_view ch, int x, int y, std::string msg)
    {
        out_.push_back({std::string(ch), x, y, std::move(msg)});
    }

    const Image* find(std::string_view name) const
    {
        const auto it = frame_.find(name);
        return it == frame_.end() ? nullptr : &it->second;
    }

    void check_shapes()
    {
        const Image& first = frame_.begin()->second;
        for (const auto& [name, img] : frame_) {
            if (!img.same_size(first)) {
                add(name, -1, -1, "dimensions differ from channel '" + frame_.begin()->first + "'");
                shapes_ok_ = false;
            }
            const int expect = channel::expected_channel_count(name);
            if (expect != 0 && img.channels() != expect) {
                add(name, -1, -1, "expected " + std::to_string(expect) + " components");
                shapes_ok_ = false;
            }
        }
    }

    bool is_background(int x, int y) const
    {
        const Image* id = find(channel::kObjectId);
        return id != nullptr && id->at(x, y) == 0.f;
    }

    void check_finite()
    {
        for (const auto& [name, img] : frame_) {
            const bool depth = name == channel::kDepth;
            for (int y = 0; y < img.height(); ++y)
                for (int x = 0; x < img.width(); ++x)
                    for (int c = 0; c < img.channels(); ++c) {
                        const float v = img.at(x, y, c);
                        if (std::isfinite(v))
                            continue;
                        // Background depth is +inf by convention.
                        if (depth && v == INFINITY && is_background(x, y))
                            continue;
                        add(name, x, y, "non-finite value");
                        break;
                    }
        }
    }

    void check_gbuffer()
    {
        const Image* id = find(channel::kObjectId);
        const Image* depth = find(channel::kDepth);
        const Image* normal = find(channel::kNormal);
        const Image* rough = find(channel::kRoughness);
        const Image* albedo = find(channel::kAlbedo);
        const Image* emissive = find(channel::kEmissive);
        if (id == nullptr)
            return;
        for (int y = 0; y < id->height(); ++y)
            for (int x = 0; x < id->width(); ++x) {
                const float idv = id->at(x, y);
                if (idv < 0.f || idv != std::floor(idv))
                    add(channel::kObjectId, x, y, "object id must be a non-negative integer");
                if (idv == 0.f)
                    continue;
                if (depth && !(depth->at(x, y) > 0.f))
                    add(channel::kDepth, x, y, "depth must be positive on foreground pixels");
                if (normal) {
                    const float len = length(normal->rgb(x, y));
                    if (std::isfinite(len) && std::abs(len - 1.f) > 1e-4f)
                        add(channel::kNormal, x, y, "normal is not unit length (|n| = " +
                                                        std::to_string(len) + ")");
                }
            }
        if (rough)
            for (int y = 0; y < rough->height(); ++y)
                for (int x = 0; x < rough->width(); ++x) {
                    const float r = rough->at(x, y);
                    if (r < 0.f || r > 1.f)
                        add(channel::kRoughness, x, y, "roughness outside [0, 1]");
                }
        for (const Image* img : {albedo, emissive}) {
            if (img == nullptr)
                continue;
            const auto name = img == albedo ? channel::kAlbedo : channel::kEmissive;
            for (int y = 0; y < img->height(); ++y)
                for (int x = 0; x < img->width(); ++x) {
                    const Vec3 v = img->rgb(x, y);
                    const bool bad = v.x < 0.f || v.y < 0.f || v.z < 0.f ||
                                     (img == albedo && (v.x > 1.f || v.y > 1.f || v.z > 1.f));
                    if (bad)
                        add(name, x, y, img == albedo ? "albedo outside [0, 1]" : "negative emission");
                }
        }
    }

    void check_noisy()
    {
        if (const Image* s = find(channel::kShadow1spp))
            for (int y = 0; y < s->height(); ++y)
                for (int x = 0; x < s->width(); ++x) {
                    const float v = s->at(x, y);
                    if (std::isfinite(v) && (v < 0.f || v > 1.f))
                        add(channel::kShadow1spp, x, y, "shadow visibility outside [0, 1]");
                }
        if (const Image* s = find(channel::kSpecular1spp))
            for (int y = 0; y < s->height(); ++y)
                for (int x = 0; x < s->width(); ++x) {
                    const Vec3 v = s->rgb(x, y);
                    if (v.x < 0.f || v.y < 0.f || v.z < 0.f)
                        add(channel::kSpecular1spp, x, y, "negative radiance");
                }
    }

    const Frame& frame_;
    std::vector<Violation> out_;
    bool shapes_ok_ = true;
};

} // namespace

std::vector<Violation> validate_frame(const Frame& frame)
{
    return Validator(frame).run();
}

std::vector<Violation> validate_gbuffer(const GBufferFrame& g)
{
    Frame f;
    store_gbuffer(f, g);
    return validate_frame(f);
}

} // namespace hd
