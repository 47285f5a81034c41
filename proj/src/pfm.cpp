// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/pfm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hd::pfm {

static_assert(std::endian::native == std::endian::little, "PFM payloads are written in host order");

void write(std::ostream& os, const Image& img)
{
    if (img.channels() != 1 && img.channels() != 3)
        throw Error("PFM supports 1 or 3 channels, got " + std::to_string(img.channels()));
    os << (img.channels() == 3 ? "PF" : "Pf") << '\n'
       << img.width() << ' ' << img.height() << '\n'
       << "-1.0\n";
    const std::size_t row = static_cast<std::size_t>(img.width()) * img.channels();
    const auto data = img.data();
    for (int y = img.height() - 1; y >= 0; --y)
        os.write(reinterpret_cast<const char*>(data.data() + row * y),
                 static_cast<std::streamsize>(row * sizeof(float)));
    if (!os)
        throw Error("PFM write failed");
}

namespace {

std::string next_token(std::istream& is)
{
    std::string tok;
    char ch = 0;
    while (is.get(ch) && std::isspace(static_cast<unsigned char>(ch))) {}
    if (!is)
        return tok;
    tok.push_back(ch);
    while (is.get(ch) && !std::isspace(static_cast<unsigned char>(ch)))
        tok.push_back(ch);
    // The single whitespace byte after the scale token has been consumed here.
    return tok;
}

} // namespace

Image read(std::istream& is, const std::string& name)
{
    const std::string magic = next_token(is);
    int channels = 0;
    if (magic == "PF")
        channels = 3;
    else if (magic == "Pf")
        channels = 1;
    else
        throw Error(name + ": malformed PFM header (bad magic '" + magic + "')");

    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(next_token(is));
        height = std::stoi(next_token(is));
        scale = std::stod(next_token(is));
    } catch (const std::exception&) {
        throw Error(name + ": malformed PFM header");
    }
    if (width <= 0 || height <= 0)
        throw Error(name + ": malformed PFM header (non-positive size)");
    if (scale == 0.0)
        throw Error(name + ": malformed PFM header (zero scale)");
    if (scale > 0.0)
        throw Error(name + ": unsupported endianness (big-endian PFM)");

    Image img(width, height, channels);
    const std::size_t row = static_cast<std::size_t>(width) * channels;
    auto data = img.data();
    for (int y = height - 1; y >= 0; --y) {
        is.read(reinterpret_cast<char*>(data.data() + row * y),
                static_cast<std::streamsize>(row * sizeof(float)));
        if (is.gcount() != static_cast<std::streamsize>(row * sizeof(float)))
            throw Error(name + ": truncated PFM payload");
    }
    return img;
}

void write(const std::filesystem::path& path, const Image& img)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    write(os, img);
}

Image read(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("cannot open '" + path.string() + "'");
    return read(is, path.string());
}

} // namespace hd::pfm
