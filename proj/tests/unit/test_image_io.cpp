// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/pfm.hpp"
#include "hd/render.hpp"
#include "hd/scene.hpp"
#include "hd/sequence_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace hd;

namespace {

// A valid single-frame sequence of the input channel set.
FrameSequence tiny_sequence(int w = 4, int h = 4)
{
    FrameSequence seq;
    seq.manifest.width = w;
    seq.manifest.height = h;
    seq.manifest.channels = channel::input_channels();
    seq.manifest.seed = 42;
    Frame f;
    GBufferFrame g = test::flat_gbuffer(w, h);
    g.object_id.at(0, 0) = 0.f; // one background pixel
    g.depth.at(0, 0) = INFINITY;
    g.normal.set_rgb(0, 0, {});
    store_gbuffer(f, g);
    f.emplace(std::string(channel::kShadow1spp), test::random_image(w, h, 1, 1));
    f.emplace(std::string(channel::kSpecular1spp), test::random_image(w, h, 3, 2, 0.f, 5.f));
    seq.frames.push_back(std::move(f));
    return seq;
}

} // namespace

TEST_SUITE("image_io")
{
    TEST_CASE("image shape checks and bit equality")
    {
        CHECK_THROWS_AS(Image(2, 2, 5), Error);
        Image a(3, 2, 3, 1.f);
        Image b = a;
        CHECK(bit_equal(a, b));
        b.at(2, 1, 2) = -0.f;
        a.at(2, 1, 2) = 0.f;
        CHECK_FALSE(bit_equal(a, b));
        CHECK(a.rgb(0, 0) == Vec3{1.f});
    }

    TEST_CASE("luminance uses Rec.709 weights")
    {
        Image img(1, 1, 3);
        img.set_rgb(0, 0, {1.f, 0.f, 0.f});
        CHECK(pixel_luminance(img, 0, 0) == doctest::Approx(0.2126f));
        img.set_rgb(0, 0, {1.f, 1.f, 1.f});
        CHECK(pixel_luminance(img, 0, 0) == doctest::Approx(1.f));
        Image s(1, 1, 1, 0.3f);
        CHECK(pixel_luminance(s, 0, 0) == 0.3f);
    }

    TEST_CASE("PFM round trip is bit exact for both channel counts")
    {
        for (int c : {1, 3}) {
            Image img = test::random_image(7, 5, c, 11u + static_cast<unsigned>(c), -100.f, 100.f);
            img.at(0, 0) = INFINITY;
            img.at(1, 0) = -0.f;
            img.at(2, 0) = 1e-42f; // denormal
            std::stringstream ss;
            pfm::write(ss, img);
            const Image back = pfm::read(ss);
            CHECK(bit_equal(img, back));
        }
    }

    TEST_CASE("PFM layout: header, scale and bottom-to-top rows")
    {
        Image img(2, 2, 1);
        img.at(0, 0) = 1.f; // top row
        img.at(1, 0) = 2.f;
        img.at(0, 1) = 3.f; // bottom row
        img.at(1, 1) = 4.f;
        std::stringstream ss;
        pfm::write(ss, img);
        const std::string s = ss.str();
        CHECK(s.rfind("Pf\n2 2\n-1.0\n", 0) == 0);
        const std::size_t off = s.size() - 16;
        float first;
        std::memcpy(&first, s.data() + off, 4);
        CHECK(first == 3.f); // file starts with the bottom row
    }

    TEST_CASE("PFM rejects big-endian and malformed headers")
    {
        std::stringstream be(std::string("PF\n1 1\n1.0\n") + std::string(12, '\0'));
        try {
            (void)pfm::read(be);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("unsupported endianness") != std::string::npos);
        }
        std::stringstream bad("P6\n1 1\n-1.0\n");
        CHECK_THROWS_AS((void)pfm::read(bad), Error);
        std::stringstream truncated("Pf\n4 4\n-1.0\n");
        truncated.write("\0\0\0\0", 4);
        CHECK_THROWS_AS((void)pfm::read(truncated), Error);
    }

    TEST_CASE("sequence round trip is bit exact")
    {
        const FrameSequence seq = tiny_sequence();
        const auto dir = test::temp_dir("seq_roundtrip");
        save_sequence(seq, dir);
        CHECK(std::filesystem::exists(dir / "manifest.json"));
        CHECK(std::filesystem::exists(dir / "frame_0000" / "depth.pfm"));
        std::size_t files = 0;
        for (const auto& e : std::filesystem::directory_iterator(dir / "frame_0000")) {
            (void)e;
            ++files;
        }
        CHECK(files == channel::input_channels().size());

        const FrameSequence back = load_sequence(dir);
        CHECK(back.manifest.width == 4);
        CHECK(back.manifest.seed == 42);
        CHECK(back.manifest.channels == seq.manifest.channels);
        REQUIRE(back.frames.size() == 1);
        for (const auto& [name, img] : seq.frames[0]) {
            CAPTURE(name);
            CHECK(bit_equal(img, back.frames[0].at(name)));
        }
    }

    TEST_CASE("synthesized sequence round trips including the environment")
    {
        auto scene = synth::scene_preset("shadow-objects", synth::Movement::Camera, 2);
        scene.width = 16;
        scene.height = 12;
        const FrameSequence seq = synth::synthesize(scene, {});
        const auto dir = test::temp_dir("seq_synth");
        save_sequence(seq, dir);
        const FrameSequence back = load_sequence(dir);
        CHECK(bit_equal(seq.env_map, back.env_map));
        CHECK(back.manifest.scene == seq.manifest.scene);
        for (std::size_t f = 0; f < seq.frames.size(); ++f)
            for (const auto& [name, img] : seq.frames[f])
                CHECK(bit_equal(img, back.frames[f].at(name)));
    }

    TEST_CASE("save rejects invalid sequences before writing")
    {
        const auto dir = test::temp_dir("seq_reject");
        FrameSequence empty;
        empty.manifest.channels = channel::input_channels();
        try {
            save_sequence(empty, dir / "a");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()) == "empty sequence");
        }
        CHECK_FALSE(std::filesystem::exists(dir / "a"));

        FrameSequence seq = tiny_sequence();
        seq.frames[0].erase(std::string(channel::kDepth));
        try {
            save_sequence(seq, dir / "b");
            FAIL("expected an error");
        } catch (const Error& e) {
            const std::string msg = e.what();
            CHECK(msg.find("frame 0") != std::string::npos);
            CHECK(msg.find("depth") != std::string::npos);
        }
        CHECK_FALSE(std::filesystem::exists(dir / "b" / "manifest.json"));

        FrameSequence nan = tiny_sequence();
        nan.frames[0].at(std::string(channel::kSpecular1spp)).at(1, 1, 0) = NAN;
        CHECK_THROWS_AS(save_sequence(nan, dir / "c"), Error);
    }

    TEST_CASE("load reports missing manifest and missing frame files by name")
    {
        const auto dir = test::temp_dir("seq_missing");
        CHECK_THROWS_WITH_AS(load_sequence(dir), doctest::Contains("missing manifest"), Error);
        save_sequence(tiny_sequence(), dir);
        std::filesystem::remove(dir / "frame_0000" / "normal.pfm");
        CHECK_THROWS_WITH_AS(load_sequence(dir), doctest::Contains("normal.pfm"), Error);
    }

    TEST_CASE("load rejects a channel with the wrong dimensions")
    {
        const auto dir = test::temp_dir("seq_dims");
        save_sequence(tiny_sequence(), dir);
        pfm::write(dir / "frame_0000" / "roughness.pfm", Image(3, 4, 1));
        CHECK_THROWS_AS(load_sequence(dir), Error);
    }

    TEST_CASE("validate_frame")
    {
        Frame f = tiny_sequence().frames[0];
        CHECK(validate_frame(f).empty());

        Frame bad_normal = f;
        bad_normal.at(std::string(channel::kNormal)).set_rgb(2, 3, {0.f, 0.f, 0.5f});
        const auto v = validate_frame(bad_normal);
        REQUIRE(v.size() == 1);
        CHECK(v[0].channel == "normal");
        CHECK(v[0].x == 2);
        CHECK(v[0].y == 3);

        Frame nan = f;
        nan.at(std::string(channel::kSpecular1spp)).at(1, 2, 1) = NAN;
        const auto vn = validate_frame(nan);
        REQUIRE(vn.size() == 1);
        CHECK(vn[0].message.find("non-finite value") != std::string::npos);

        Frame shadow = f;
        shadow.at(std::string(channel::kShadow1spp)).at(1, 1) = 1.5f;
        CHECK(validate_frame(shadow).size() == 1);

        Frame rough = f;
        rough.at(std::string(channel::kRoughness)).at(1, 1) = -0.1f;
        CHECK_FALSE(validate_frame(rough).empty());

        Frame depth = f;
        depth.at(std::string(channel::kDepth)).at(1, 1) = 0.f;
        CHECK_FALSE(validate_frame(depth).empty());
    }

    TEST_CASE("rendered frames validate cleanly")
    {
        for (const auto& name : synth::scene_preset_names()) {
            auto scene = synth::scene_preset(name, synth::Movement::ObjectsAndLight, 3);
            scene.width = 24;
            scene.height = 20;
            const FrameSequence seq = synth::synthesize(scene, {});
            for (const auto& f : seq.frames) {
                const auto v = validate_frame(f);
                CAPTURE(name);
                CHECK(v.empty());
            }
        }
    }
}
