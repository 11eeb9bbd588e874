// SPDX-License-Identifier: Apache-2.0
//
// rissim: RIS-assisted blockage pre-avoidance simulator
// Copyright (C) 2026 The rissim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rissim {

using Engine = std::mt19937_64;

/// Counter-based substream addressing.
///
/// A StreamKey is a 64-bit digest of a path such as (seed, trial, slot, link).
/// Deriving a child mixes one more coordinate into the digest; the engine for a
/// key is seeded from the digest alone. Two draws that share a key path see the
/// same numbers no matter which other streams were consumed before, which is
/// what makes common random numbers across schemes and sweep values hold.
class StreamKey
{
public:
    constexpr StreamKey() = default;
    constexpr explicit StreamKey(std::uint64_t seed) : state_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

    constexpr StreamKey derive(std::uint64_t coordinate) const
    {
        StreamKey k;
        k.state_ = mix(state_ ^ mix(coordinate + 0x9e3779b97f4a7c15ULL));
        return k;
    }

    constexpr StreamKey derive(std::string_view label) const { return derive(fnv1a(label)); }

    template <typename... Rest>
    constexpr StreamKey derive(std::uint64_t first, Rest... rest) const
    {
        if constexpr (sizeof...(rest) == 0)
            return derive(first);
        else
            return derive(first).derive(rest...);
    }

    Engine engine() const { return Engine(state_); }

    constexpr std::uint64_t value() const { return state_; }

    static constexpr std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
};

/// Stream labels used across the simulator.
namespace streams {
inline constexpr std::uint64_t direct = 1;
inline constexpr std::uint64_t ris_inbound = 2;
inline constexpr std::uint64_t ris_outbound = 3;
inline constexpr std::uint64_t repeater_hop1 = 4;
inline constexpr std::uint64_t repeater_hop2 = 5;
inline constexpr std::uint64_t extra_bs = 6;
inline constexpr std::uint64_t sub6 = 7;
inline constexpr std::uint64_t phase_noise = 8;
inline constexpr std::uint64_t random_phase = 9;
inline constexpr std::uint64_t prediction = 10;
}  // namespace streams

}  // namespace rissim
