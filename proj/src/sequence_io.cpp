// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/sequence_io.hpp"
#include "hd/pfm.hpp"

#include <cstdio>
#include <fstream>

namespace fs = std::filesystem;

namespace hd {

std::string frame_dir_name(int index)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d", index);
    return buf;
}

nlohmann::json manifest_to_json(const Manifest& m, int frame_count)
{
    return {
        {"format_version", m.format_version},
        {"width", m.width},
        {"height", m.height},
        {"frame_count", frame_count},
        {"channels", m.channels},
        {"scene", m.scene},
        {"seed", m.seed},
        {"extra", m.extra},
    };
}

Manifest manifest_from_json(const nlohmann::json& j, int& frame_count)
{
    Manifest m;
    try {
        m.format_version = j.at("format_version").get<int>();
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
        frame_count = j.at("frame_count").get<int>();
        m.channels = j.at("channels").get<std::vector<std::string>>();
        m.scene = j.value("scene", nlohmann::json::object());
        m.seed = j.value("seed", std::uint64_t{0});
        m.extra = j.value("extra", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed manifest: ") + e.what());
    }
    if (m.format_version != 1)
        throw Error("unsupported manifest format_version " + std::to_string(m.format_version));
    return m;
}

void check_sequence(const FrameSequence& seq)
{
    if (seq.frames.empty())
        throw Error("empty sequence");
    const Manifest& m = seq.manifest;
    if (m.channels.empty())
        throw Error("manifest lists no channels");
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const Frame& f = seq.frames[i];
        const std::string where = "frame " + std::to_string(i);
        for (const auto& name : m.channels) {
            const auto it = f.find(name);
            if (it == f.end())
                throw Error(where + ": missing channel '" + name + "'");
            if (it->second.width() != m.width || it->second.height() != m.height)
                throw Error(where + ": channel '" + name + "' is " + std::to_string(it->second.width()) +
                            "x" + std::to_string(it->second.height()) + ", manifest says " +
                            std::to_string(m.width) + "x" + std::to_string(m.height));
        }
        for (const auto& [name, img] : f)
            if (std::find(m.channels.begin(), m.channels.end(), name) == m.channels.end())
                throw Error(where + ": channel '" + name + "' not listed in manifest");
        if (const auto v = validate_frame(f); !v.empty())
            throw Error(where + ": " + describe(v.front()) +
                        (v.size() > 1 ? " (+" + std::to_string(v.size() - 1) + " more)" : ""));
    }
    if (!seq.env_map.empty() && seq.env_map.channels() != 3)
        throw Error("environment map must have 3 channels");
}

void save_sequence(const FrameSequence& seq, const fs::path& dir)
{
    check_sequence(seq);

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create '" + dir.string() + "': " + ec.message());

    {
        std::ofstream os(dir / "manifest.json");
        if (!os)
            throw Error("cannot write manifest in '" + dir.string() + "'");
        os << manifest_to_json(seq.manifest, static_cast<int>(seq.frames.size())).dump(2) << '\n';
        if (!os)
            throw Error("manifest write failed");
    }
    if (!seq.env_map.empty())
        pfm::write(dir / "env_map.pfm", seq.env_map);

    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const fs::path fdir = dir / frame_dir_name(static_cast<int>(i));
        fs::create_directories(fdir, ec);
        if (ec)
            throw Error("cannot create '" + fdir.string() + "': " + ec.message());
        for (const auto& name : seq.manifest.channels)
            pfm::write(fdir / (name + ".pfm"), seq.frames[i].find(name)->second);
    }
}

FrameSequence load_sequence(const fs::path& dir)
{
    const fs::path mpath = dir / "manifest.json";
    std::ifstream is(mpath);
    if (!is)
        throw Error("missing manifest: '" + mpath.string() + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed manifest: " + std::string(e.what()));
    }

    FrameSequence seq;
    int frame_count = 0;
    seq.manifest = manifest_from_json(j, frame_count);
    if (frame_count <= 0)
        throw Error("empty sequence");

    if (fs::exists(dir / "env_map.pfm"))
        seq.env_map = pfm::read(dir / "env_map.pfm");

    seq.frames.resize(static_cast<std::size_t>(frame_count));
    for (int i = 0; i < frame_count; ++i) {
        const fs::path fdir = dir / frame_dir_name(i);
        for (const auto& name : seq.manifest.channels) {
            const fs::path p = fdir / (name + ".pfm");
            if (!fs::exists(p))
                throw Error("missing frame file '" + p.string() + "'");
            seq.frames[static_cast<std::size_t>(i)].emplace(name, pfm::read(p));
        }
    }
    check_sequence(seq);
    return seq;
}

} // namespace hd
