// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hd/frame.hpp"

#include <filesystem>

namespace hd {

// Directory layout:
//   manifest.json
//   env_map.pfm              (when the sequence carries one)
//   frame_%04d/<channel>.pfm
void save_sequence(const FrameSequence& seq, const std::filesystem::path& dir);
FrameSequence load_sequence(const std::filesystem::path& dir);

// Throws hd::Error describing the first problem; used before any write.
void check_sequence(const FrameSequence& seq);

std::string frame_dir_name(int index);

nlohmann::json manifest_to_json(const Manifest& m, int frame_count);
Manifest manifest_from_json(const nlohmann::json& j, int& frame_count);

} // namespace hd
