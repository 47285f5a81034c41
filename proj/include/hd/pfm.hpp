// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/image.hpp"

#include <filesystem>
#include <iosfwd>

namespace hd::pfm {

// Portable FloatMap I/O. Only little-endian files (negative scale) are
// accepted; rows are stored bottom-to-top as the format requires. Payloads
// round-trip bit-exactly.
void write(const std::filesystem::path& path, const Image& img);
Image read(const std::filesystem::path& path);

void write(std::ostream& os, const Image& img);
Image read(std::istream& is, const std::string& name = "<stream>");

} // namespace hd::pfm
