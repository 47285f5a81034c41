// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/render.hpp"
#include "hd/compose.hpp"
#include "hd/parallel.hpp"
#include "hd/rng.hpp"

#include <limits>

namespace hd::synth {

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();
constexpr float kTMin = 1e-4f;
constexpr float kRayOffset = 1e-3f;

enum Purpose : std::uint64_t { kShadowStream = 1, kSpecularStream = 2, kFireflyStream = 3 };

struct Ray {
    Vec3 origin;
    Vec3 dir;
};

struct Hit {
    float t = kInf;
    Vec3 normal;
    int object = -1; // index into SceneState::objects, or kGround
};

constexpr int kGround = -2;

struct PlacedObject {
    const ObjectDesc* desc;
    Vec3 center;
    Vec3 offset;
};

struct SceneState {
    Camera camera;
    LightState light;
    std::vector<PlacedObject> objects;
    const GroundDesc* ground = nullptr;

    const Material& material(int object) const
    {
        return object == kGround ? ground->material : objects[static_cast<std::size_t>(object)].desc->material;
    }
    int id(int object) const
    {
        return object == kGround ? ground->id : objects[static_cast<std::size_t>(object)].desc->id;
    }
    Vec3 offset(int object) const
    {
        return object == kGround ? Vec3{} : objects[static_cast<std::size_t>(object)].offset;
    }
};

SceneState state_at(const SceneDescriptor& s, int frame)
{
    SceneState st;
    st.camera = camera_at(s, frame);
    st.light = light_at(s, frame);
    for (const auto& o : s.objects) {
        const Vec3 off = evaluate_track(o.offset_keys, frame);
        st.objects.push_back({&o, o.center + off, off});
    }
    st.ground = s.ground.enabled ? &s.ground : nullptr;
    return st;
}

bool hit_sphere(const Ray& r, const Vec3& c, float radius, float tmax, float& t)
{
    const Vec3 oc = r.origin - c;
    const float b = dot(oc, r.dir);
    const float cc = dot(oc, oc) - radius * radius;
    const float disc = b * b - cc;
    if (disc < 0.f)
        return false;
    const float s = std::sqrt(disc);
    float tt = -b - s;
    if (tt < kTMin)
        tt = -b + s;
    if (tt < kTMin || tt >= tmax)
        return false;
    t = tt;
    return true;
}

bool hit_box(const Ray& r, const Vec3& c, const Vec3& half, float tmax, float& t)
{
    float t0 = -kInf, t1 = kInf;
    for (int a = 0; a < 3; ++a) {
        const float inv = 1.f / r.dir[a];
        float ta = (c[a] - half[a] - r.origin[a]) * inv;
        float tb = (c[a] + half[a] - r.origin[a]) * inv;
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (t1 < t0)
        return false;
    const float tt = t0 >= kTMin ? t0 : t1;
    if (tt < kTMin || tt >= tmax)
        return false;
    t = tt;
    return true;
}

Vec3 box_normal(const Vec3& p, const Vec3& c, const Vec3& half)
{
    int axis = 0;
    float best = -1.f;
    for (int a = 0; a < 3; ++a) {
        const float d = std::abs(p[a] - c[a]) / half[a];
        if (d > best) {
            best = d;
            axis = a;
        }
    }
    Vec3 n;
    n[axis] = p[axis] >= c[axis] ? 1.f : -1.f;
    return n;
}

bool intersect(const SceneState& st, const Ray& r, float tmax, Hit& hit)
{
    hit = Hit{};
    hit.t = tmax;
    bool found = false;
    for (std::size_t i = 0; i < st.objects.size(); ++i) {
        const auto& o = st.objects[i];
        float t;
        const bool h = o.desc->shape == Shape::Sphere ? hit_sphere(r, o.center, o.desc->radius, hit.t, t)
                                                      : hit_box(r, o.center, o.desc->half_extent, hit.t, t);
        if (h) {
            hit.t = t;
            hit.object = static_cast<int>(i);
            found = true;
        }
    }
    if (st.ground && std::abs(r.dir.y) > 1e-8f) {
        const float t = (st.ground->height - r.origin.y) / r.dir.y;
        if (t >= kTMin && t < hit.t) {
            hit.t = t;
            hit.object = kGround;
            found = true;
        }
    }
    if (!found)
        return false;

    const Vec3 p = r.origin + r.dir * hit.t;
    if (hit.object == kGround) {
        hit.normal = {0.f, 1.f, 0.f};
    } else {
        const auto& o = st.objects[static_cast<std::size_t>(hit.object)];
        hit.normal = o.desc->shape == Shape::Sphere ? normalize(p - o.center) : box_normal(p, o.center, o.desc->half_extent);
    }
    if (dot(hit.normal, r.dir) > 0.f)
        hit.normal = -hit.normal;
    return true;
}

bool occluded(const SceneState& st, const Vec3& origin, const Vec3& dir, float dist)
{
    Hit h;
    return intersect(st, {origin, dir}, dist * (1.f - 1e-4f), h);
}

Vec3 sample_lobe(const Vec3& axis, float exponent, float u1, float u2)
{
    if (std::isinf(exponent))
        return axis;
    const float cos_t = std::pow(u1, 1.f / (exponent + 1.f));
    const float sin_t = std::sqrt(std::max(0.f, 1.f - cos_t * cos_t));
    const float phi = 2.f * kPi * u2;
    Vec3 t, b;
    orthonormal_basis(axis, t, b);
    return normalize(t * (sin_t * std::cos(phi)) + b * (sin_t * std::sin(phi)) + axis * cos_t);
}

// Direct light at a secondary hit with a single deterministic visibility
// test toward the light centre.
Vec3 direct_hard(const SceneState& st, const Vec3& p, const Vec3& n, const Material& m)
{
    const Vec3 to_light = st.light.center - p;
    const float dist2 = dot(to_light, to_light);
    const float dist = std::sqrt(dist2);
    const Vec3 l = to_light / dist;
    const float cos_t = dot(n, l);
    if (cos_t <= 0.f)
        return {};
    const Vec3 origin = p + n * kRayOffset;
    if (occluded(st, origin, l, dist))
        return {};
    return m.albedo * st.light.intensity * (cos_t / (kPi * dist2));
}

struct PixelContext {
    const SceneState& st;
    const EnvMap& env;
    const PrefilteredEnvMap& prefiltered;
    bool ibl_secondary;
};

Vec3 shade_secondary(const PixelContext& ctx, const Ray& r)
{
    Hit h;
    if (!intersect(ctx.st, r, kInf, h))
        return ctx.env.lookup(r.dir);
    const Vec3 p = r.origin + r.dir * h.t;
    const Material& m = ctx.st.material(h.object);
    Vec3 l = m.emissive + direct_hard(ctx.st, p, h.normal, m);
    if (ctx.ibl_secondary)
        l += m.albedo * ctx.prefiltered.lookup(reflect(r.dir, h.normal), m.roughness);
    return l;
}

struct PrimarySample {
    bool hit = false;
    Vec3 position;
    Vec3 normal;
    int object = -1;
};

void render_pixels(const SceneDescriptor& scene, const EnvMap& env, const PrefilteredEnvMap& pre, int frame, int spp,
                   std::uint64_t seed, bool ibl, bool want_gbuffer, GBufferFrame* g, Image& shadow, Image& specular)
{
    const SceneState st = state_at(scene, frame);
    const SceneState prev = state_at(scene, std::max(frame - 1, 0));
    const PixelContext ctx{st, env, pre, ibl};
    const int w = scene.width;
    const int h = scene.height;

    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            const Vec3 dir = st.camera.primary_direction(x, y);
            Hit hit;
            if (!intersect(st, {st.camera.position, dir}, kInf, hit)) {
                shadow.at(x, y) = 1.f;
                specular.set_rgb(x, y, {});
                if (want_gbuffer) {
                    g->shadow_angle.at(x, y) = scene.shadow_angle_deg;
                }
                continue;
            }
            const Vec3 p = st.camera.position + dir * hit.t;
            const Vec3 n = hit.normal;
            const Material& mat = st.material(hit.object);

            if (want_gbuffer) {
                g->depth.at(x, y) = hit.t;
                g->normal.set_rgb(x, y, n);
                g->object_id.at(x, y) = static_cast<float>(st.id(hit.object));
                g->albedo.set_rgb(x, y, mat.albedo);
                g->roughness.at(x, y) = mat.roughness;
                g->emissive.set_rgb(x, y, mat.emissive);
                g->shadow_angle.at(x, y) = scene.shadow_angle_deg;
                const Vec3 p_prev = p - (st.offset(hit.object) - prev.offset(hit.object));
                const Vec2 now = st.camera.project(p);
                const Vec2 then = prev.camera.project(p_prev);
                g->motion.at(x, y, 0) = then.x - now.x;
                g->motion.at(x, y, 1) = then.y - now.y;
            }

            const Vec3 origin = p + n * kRayOffset;
            const Vec3 mirror = reflect(dir, n);
            const float exponent = phong_exponent(mat.roughness);
            std::uint64_t unoccluded = 0;
            double spec[3] = {0.0, 0.0, 0.0};
            for (int s = 0; s < spp; ++s) {
                const std::uint64_t sample_seed = seed + static_cast<std::uint64_t>(s);
                CounterRng shadow_rng(pixel_key(sample_seed, static_cast<std::uint64_t>(frame), static_cast<std::uint64_t>(x),
                                                static_cast<std::uint64_t>(y), kShadowStream));
                const float z = 1.f - 2.f * shadow_rng.next();
                const float phi = 2.f * kPi * shadow_rng.next();
                const float rr = std::sqrt(std::max(0.f, 1.f - z * z));
                const Vec3 q = st.light.center + Vec3{rr * std::cos(phi), rr * std::sin(phi), z} * st.light.radius;
                const Vec3 to_q = q - origin;
                const float dist = length(to_q);
                if (!occluded(st, origin, to_q / dist, dist))
                    ++unoccluded;

                CounterRng spec_rng(pixel_key(sample_seed, static_cast<std::uint64_t>(frame), static_cast<std::uint64_t>(x),
                                              static_cast<std::uint64_t>(y), kSpecularStream));
                const float u1 = spec_rng.next();
                const float u2 = spec_rng.next();
                const Vec3 d = sample_lobe(mirror, exponent, u1, u2);
                if (dot(d, n) <= 0.f)
                    continue;
                const Vec3 l = shade_secondary(ctx, {origin, d}) * mat.specular;
                spec[0] += l.x;
                spec[1] += l.y;
                spec[2] += l.z;
            }
            shadow.at(x, y) = static_cast<float>(static_cast<double>(unoccluded) / spp);
            for (int c = 0; c < 3; ++c)
                specular.at(x, y, c) = static_cast<float>(spec[c] / spp);
        }
    });
}

} // namespace

Renderer::Renderer(SceneDescriptor scene) : scene_(std::move(scene))
{
    if (const auto errs = validate(scene_); !errs.empty())
        throw Error("invalid scene: " + errs.front());
    env_ = EnvMap(make_env_image(scene_));
    prefiltered_ = prefilter_env(env_, scene_.env_levels);
}

RenderedFrame Renderer::render_frame(int frame, int spp, std::uint64_t seed, bool ibl_secondary) const
{
    if (frame < 0 || frame >= scene_.frame_count)
        throw Error("frame index " + std::to_string(frame) + " outside the animation");
    if (spp < 1)
        throw Error("spp must be >= 1");
    RenderedFrame out;
    out.gbuffer = GBufferFrame::allocate(scene_.width, scene_.height);
    out.shadow = {ChannelKind::Shadow, Image(scene_.width, scene_.height, 1), spp};
    out.specular = {ChannelKind::IndirectSpecular, Image(scene_.width, scene_.height, 3), spp};
    render_pixels(scene_, env_, prefiltered_, frame, spp, seed, ibl_secondary, true, &out.gbuffer, out.shadow.data,
                  out.specular.data);
    return out;
}

ReferenceFrame Renderer::render_reference(int frame, std::uint64_t seed, bool ibl_secondary) const
{
    RenderedFrame r = render_frame(frame, kReferenceSpp, reference_seed(seed), ibl_secondary);
    ReferenceFrame out;
    out.shadow = std::move(r.shadow.data);
    out.specular = std::move(r.specular.data);
    const Camera cam = camera_at(scene_, frame);
    const Image direct = compose::shade_direct(r.gbuffer, cam, light_at(scene_, frame));
    out.composite = compose::composite(direct, out.shadow, out.specular, r.gbuffer, env_, cam);
    return out;
}

RenderedFrame render_frame(const SceneDescriptor& scene, int frame, int spp, std::uint64_t seed, bool ibl_secondary)
{
    return Renderer(scene).render_frame(frame, spp, seed, ibl_secondary);
}

ReferenceFrame render_reference(const SceneDescriptor& scene, int frame, std::uint64_t seed, bool ibl_secondary)
{
    return Renderer(scene).render_reference(frame, seed, ibl_secondary);
}

Image inject_fireflies(const Image& channel, float rate, float magnitude, std::uint64_t seed)
{
    if (!(rate >= 0.f && rate <= 1.f))
        throw Error("firefly rate must be in [0, 1]");
    Image out = channel;
    if (rate == 0.f)
        return out;
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            CounterRng rng(pixel_key(seed, 0, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y), kFireflyStream));
            if (rng.next() < rate)
                for (int c = 0; c < out.channels(); ++c)
                    out.at(x, y, c) += magnitude;
        }
    return out;
}

FrameSequence synthesize(const SceneDescriptor& scene, const SynthOptions& opt)
{
    const Renderer renderer(scene);
    FrameSequence seq;
    seq.manifest.width = scene.width;
    seq.manifest.height = scene.height;
    seq.manifest.channels = channel::input_channels();
    if (opt.reference) {
        seq.manifest.channels.emplace_back(channel::kReferenceShadow);
        seq.manifest.channels.emplace_back(channel::kReferenceSpecular);
        seq.manifest.channels.emplace_back(channel::kReference);
    }
    seq.manifest.scene = to_json(scene);
    seq.manifest.seed = opt.seed;
    seq.manifest.extra = {{"spp", opt.spp},
                          {"ibl_secondary", opt.ibl_secondary},
                          {"firefly_rate", opt.firefly_rate},
                          {"firefly_magnitude", opt.firefly_magnitude},
                          {"reference_spp", opt.reference ? kReferenceSpp : 0}};
    seq.env_map = renderer.env().texels();

    for (int f = 0; f < scene.frame_count; ++f) {
        RenderedFrame r = renderer.render_frame(f, opt.spp, opt.seed, opt.ibl_secondary);
        Frame frame;
        store_gbuffer(frame, r.gbuffer);
        frame.emplace(std::string(channel::kShadow1spp), std::move(r.shadow.data));
        Image spec = std::move(r.specular.data);
        if (opt.firefly_rate > 0.f)
            spec = inject_fireflies(spec, opt.firefly_rate, opt.firefly_magnitude,
                                    hash_combine(opt.seed, 0xF12EF1Eull + static_cast<std::uint64_t>(f)));
        frame.emplace(std::string(channel::kSpecular1spp), std::move(spec));
        if (opt.reference) {
            ReferenceFrame ref = renderer.render_reference(f, opt.seed, opt.ibl_secondary);
            frame.emplace(std::string(channel::kReferenceShadow), std::move(ref.shadow));
            frame.emplace(std::string(channel::kReferenceSpecular), std::move(ref.specular));
            frame.emplace(std::string(channel::kReference), std::move(ref.composite));
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

} // namespace hd::synth
