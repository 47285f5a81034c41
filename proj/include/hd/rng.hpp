// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace hd {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v)); }

/// Counter-based stream: the key fixes the sequence, next() walks it.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t next_u64() { return mix64(key_ + 0x632BE59BD9B4E019ull * ++counter_); }

    // Uniform in [0, 1) with 24 bits of precision.
    constexpr float next() { return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

constexpr std::uint64_t pixel_key(std::uint64_t seed, std::uint64_t frame, std::uint64_t x,
                                  std::uint64_t y, std::uint64_t purpose)
{
    std::uint64_t h = mix64(seed);
    h = hash_combine(h, frame);
    h = hash_combine(h, (x << 32) | y);
    return hash_combine(h, purpose);
}

} // namespace hd
