// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/sequence_io.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace hd;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult hdn(const std::string& args)
{
    const std::string cmd = std::string(HD_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe))
        r.output += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("synth, denoise, eval and bench round trip")
    {
        const auto dir = test::temp_dir("cli");
        const std::string seq = (dir / "seq").string();
        const std::string den = (dir / "den").string();

        RunResult r = hdn("synth --scene pillars --movement camera --frames 3 --width 48 --height 40 --seed 4 "
                          "--reference --out " + seq);
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const FrameSequence s = load_sequence(seq);
        CHECK(s.frames.size() == 3);
        CHECK(s.manifest.width == 48);
        CHECK(s.frames[0].count("reference") == 1);

        r = hdn("denoise --in " + seq + " --preset svgf+rectify --set iterations=3 --trace --out " + den);
        REQUIRE_MESSAGE(r.code == 0, r.output);
        CHECK(r.output.find("frame 0: temporal [shadow]") != std::string::npos);
        CHECK(r.output.find("frame 2: taa") != std::string::npos);
        const FrameSequence d = load_sequence(den);
        CHECK(d.frames[1].count("final") == 1);
        CHECK(d.manifest.extra.at("config").at("iterations") == 3);
        const nlohmann::json report = nlohmann::json::parse(slurp(dir / "den" / "report.json"));
        CHECK(report.at("frames").size() == 3);

        r = hdn("eval --a " + den + " --b " + seq + " --report json --out " + (dir / "eval.json").string());
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const nlohmann::json ev = nlohmann::json::parse(slurp(dir / "eval.json"));
        REQUIRE(ev.at("records").size() == 4); // three frames plus the mean
        CHECK(ev["records"][3]["frame"] == -1);
        CHECK(ev["records"][0]["ssim"].get<double>() > 0.0);

        r = hdn("eval --a " + den + " --b " + seq + " --report csv --parameter roughness --value 0.5");
        REQUIRE_MESSAGE(r.code == 0, r.output);
        CHECK(r.output.rfind("scene,stack,parameter,value,movement,frame,ssim,mse", 0) == 0);
        CHECK(r.output.find("roughness,0.5") != std::string::npos);

        r = hdn("eval --a " + seq + " --b " + seq + " --channel-a shadow_1spp --channel-b shadow_1spp");
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const nlohmann::json self = nlohmann::json::parse(r.output);
        CHECK(self["records"][0]["ssim"].get<double>() == 1.0);
        CHECK(self["records"][0]["mse"].get<double>() == 0.0);

        r = hdn("bench --in " + seq + " --preset svgf+rectify+adaptive+separable --reps 3 --report " +
                (dir / "bench.json").string());
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const nlohmann::json b = nlohmann::json::parse(slurp(dir / "bench.json"));
        CHECK(b.at("taps_total").get<std::uint64_t>() > 0);
        const auto& seqt = b.at("sequence");
        CHECK(seqt.at("min_ms").get<double>() <= seqt.at("avg_ms").get<double>());
        CHECK(seqt.at("avg_ms").get<double>() <= seqt.at("max_ms").get<double>());
    }

    TEST_CASE("scene files and config files")
    {
        const auto dir = test::temp_dir("cli_files");
        const std::string scene = (std::filesystem::path(HD_SOURCE_DIR) / "scenes" / "orbiting-light.json").string();
        RunResult r = hdn("synth --scene " + scene + " --frames 2 --width 32 --height 24 --out " + (dir / "s").string());
        REQUIRE_MESSAGE(r.code == 0, r.output);
        {
            std::ofstream cfg(dir / "cfg.json");
            cfg << R"({"iterations": 2, "rectify_mode": "clip"})";
        }
        r = hdn("denoise --in " + (dir / "s").string() + " --config " + (dir / "cfg.json").string() +
                " --dump-intermediates --out " + (dir / "d").string());
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const FrameSequence d = load_sequence(dir / "d");
        CHECK(d.frames[0].count("shadow_temporal") == 1);
        CHECK(d.manifest.extra.at("config").at("rectify_mode") == "clip");
    }

    TEST_CASE("errors exit nonzero with a diagnostic")
    {
        const auto dir = test::temp_dir("cli_errors");
        CHECK(hdn("").code != 0);
        CHECK(hdn("frobnicate").code != 0);

        RunResult r = hdn("synth --scene no-such-scene --out " + (dir / "x").string());
        CHECK(r.code != 0);
        CHECK(r.output.find("hdn: error:") != std::string::npos);

        r = hdn("denoise --in " + dir.string() + " --out " + (dir / "y").string());
        CHECK(r.code != 0);
        CHECK(r.output.find("manifest") != std::string::npos);

        hdn("synth --scene pillars --frames 1 --width 32 --height 32 --out " + (dir / "s").string());
        r = hdn("denoise --in " + (dir / "s").string() + " --preset nope --out " + (dir / "y").string());
        CHECK(r.code != 0);
        r = hdn("denoise --in " + (dir / "s").string() + " --set alpha=2 --out " + (dir / "y").string());
        CHECK(r.code != 0);
        CHECK(r.output.find("alpha") != std::string::npos);
        r = hdn("denoise --in " + (dir / "s").string() + " --set bogus=1 --out " + (dir / "y").string());
        CHECK(r.code != 0);
        r = hdn("bench --in " + (dir / "s").string() + " --reps 2");
        CHECK(r.code != 0);
        r = hdn("eval --a " + (dir / "s").string() + " --b " + (dir / "s").string() + " --channel-a final");
        CHECK(r.code != 0);
    }
}
