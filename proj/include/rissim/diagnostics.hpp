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

#include <atomic>
#include <cstdint>

namespace rissim {

/// Process-wide warning counters. Clamping never aborts a run; it is counted.
struct Diagnostics
{
    std::atomic<std::uint64_t> distance_clamps{0};  // path_loss_db distance < 1 m
    std::atomic<std::uint64_t> grid_clamps{0};      // region-map lookup outside the grid

    void reset()
    {
        distance_clamps = 0;
        grid_clamps = 0;
    }
};

inline Diagnostics& diagnostics()
{
    static Diagnostics d;
    return d;
}

}  // namespace rissim
