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

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rissim {

/// One way of reaching the UE. `index` is 0-based; names are 1-based ("RIS1").
struct PathCandidate
{
    enum class Kind : std::uint8_t
    {
        Direct,
        ViaRis,
        ViaRepeater,
        ViaExtraBs,
    };

    Kind kind = Kind::Direct;
    int index = -1;

    static constexpr PathCandidate direct() { return {Kind::Direct, -1}; }
    static constexpr PathCandidate via_ris(int i) { return {Kind::ViaRis, i}; }
    static constexpr PathCandidate via_repeater(int i) { return {Kind::ViaRepeater, i}; }
    static constexpr PathCandidate via_extra_bs() { return {Kind::ViaExtraBs, -1}; }

    constexpr bool needs_index() const { return kind == Kind::ViaRis || kind == Kind::ViaRepeater; }

    /// Stable small integer, used to address per-path random streams.
    constexpr std::uint64_t code() const
    {
        return (static_cast<std::uint64_t>(kind) << 32) | static_cast<std::uint32_t>(index + 1);
    }

    std::string name() const
    {
        switch (kind)
        {
        case Kind::Direct: return "Direct";
        case Kind::ViaRis: return "RIS" + std::to_string(index + 1);
        case Kind::ViaRepeater: return "Repeater" + std::to_string(index + 1);
        case Kind::ViaExtraBs: return "ExtraBS";
        }
        return "?";
    }

    static PathCandidate parse(const std::string& s)
    {
        if (s == "Direct")
            return direct();
        if (s == "ExtraBS")
            return via_extra_bs();
        auto numbered = [&](const std::string& prefix, Kind kind) -> PathCandidate {
            int i = std::stoi(s.substr(prefix.size()));
            if (i < 1)
                throw std::invalid_argument("bad path index in '" + s + "'");
            return {kind, i - 1};
        };
        if (s.rfind("RIS", 0) == 0)
            return numbered("RIS", Kind::ViaRis);
        if (s.rfind("Repeater", 0) == 0)
            return numbered("Repeater", Kind::ViaRepeater);
        throw std::invalid_argument("unknown path name '" + s + "'");
    }

    friend constexpr auto operator<=>(const PathCandidate&, const PathCandidate&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const PathCandidate& p) { return os << p.name(); }

}  // namespace rissim
