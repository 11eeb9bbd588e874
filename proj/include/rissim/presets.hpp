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

#include "rissim/engine.hpp"
#include "rissim/errors.hpp"
#include "rissim/scenario.hpp"
#include "rissim/schemes.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rissim {

enum class PresetKind
{
    Sweep,       // metrics.csv (+ metrics_impaired.csv)
    Trajectory,  // trajectory.csv
    RegionMap,   // regionmap.csv
};

/// A fully specified experiment; only the seed and trial count are free.
struct Preset
{
    std::string name;
    PresetKind kind = PresetKind::Sweep;
    Scenario scenario;
    std::optional<Scenario> impaired;  // hardware-impaired twin, same sweep
    std::vector<SchemeId> schemes;
    SweepVariable variable = SweepVariable::TxPower;
    std::vector<double> values;
    int n_slots = 200;
    int default_trials = 100;
    std::vector<double> blocker_positions;  // RegionMap presets
};

inline std::vector<double> arithmetic_range(double from, double to, double step)
{
    if (!(step > 0.0) || to < from)
        throw ValidationError("sweep range needs step > 0 and to >= from");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        v.push_back(from + static_cast<double>(i) * step);
    return v;
}

inline constexpr double default_phase_noise_bound = std::numbers::pi / 8.0;

/// Transceiver distortion on; optionally RIS phase noise as well.
inline Scenario impaired_variant(Scenario s, bool with_phase_noise)
{
    s.impairments.enabled = true;
    if (with_phase_noise)
        for (auto& r : s.ris_list)
            r.phase_noise_bound = default_phase_noise_bound;
    return s;
}

/// Throughput vs BS power, all seven schemes; `ris_count` 3 adds the 150 m RIS.
inline Preset fig2_preset(int ris_count = 2)
{
    if (ris_count != 2 && ris_count != 3)
        throw ValidationError("fig2 supports 2 or 3 RIS");
    Preset p;
    p.name = "fig2";
    p.scenario = default_scenario();
    if (ris_count == 3)
    {
        RisSpec r;
        r.position = roadside_at_hop_distance(p.scenario.bs_position, 150.0, 15.0, 5.0);
        p.scenario.ris_list.push_back(r);
    }
    p.impaired = impaired_variant(p.scenario, false);
    p.schemes = {all_schemes.begin(), all_schemes.end()};
    p.values = arithmetic_range(0.0, 50.0, 2.0);
    return p;
}

/// Outage vs BS power at an 8 bit/s/Hz threshold, smaller RIS, distant extra BS.
inline Preset fig3_preset()
{
    Preset p;
    p.name = "fig3";
    p.scenario = default_scenario();
    for (auto& r : p.scenario.ris_list)
        r.n_elements = 100;
    p.scenario.extra_bs->position = p.scenario.bs_position + Vec3(5000.0, 0.0, 0.0);
    p.scenario.rate_threshold = 8.0;
    p.impaired = impaired_variant(p.scenario, true);
    p.schemes = {SchemeId::LSRPA, SchemeId::Benchmark, SchemeId::RandomPhase, SchemeId::NoRisMmw,
                 SchemeId::AdditionalBs};
    p.values = arithmetic_range(0.0, 70.0, 1.0);
    return p;
}

/// One drive past a truck at 50 dBm: the direct link is clear for the first
/// second, shadowed until about 9.1 s while the UE overtakes, then clear again.
inline Preset fig4_preset()
{
    Preset p;
    p.name = "fig4";
    p.kind = PresetKind::Trajectory;
    p.scenario = default_scenario();
    p.scenario.tx_power_dbm = 50.0;
    p.scenario.ue_start.position.x() = 60.0;
    p.scenario.blocker->pose.position.x() = 66.0;
    p.schemes = {SchemeId::LSRPA, SchemeId::Benchmark, SchemeId::RandomPhase, SchemeId::NoRisMmw,
                 SchemeId::NoRisSub6, SchemeId::AdditionalBs, SchemeId::Repeater};
    p.n_slots = 1000;
    p.default_trials = 1;
    return p;
}

/// Regions of responsibility for three truck positions.
inline Preset fig5_preset()
{
    Preset p;
    p.name = "fig5";
    p.kind = PresetKind::RegionMap;
    p.scenario = default_scenario();
    p.blocker_positions = {126.0, 128.0, 130.0};
    p.default_trials = 1;
    return p;
}

/// Throughput vs RIS size at 15 dBm, wider mmWave band, weaker sub-6 fallback.
inline Preset fig6_preset()
{
    Preset p;
    p.name = "fig6";
    p.scenario = default_scenario();
    p.scenario.bandwidth = 20e6;
    p.scenario.tx_power_dbm = 15.0;
    p.scenario.sub6->bandwidth = 5e6;
    p.scenario.sub6->bs_antennas = 8;
    p.scenario.sub6->vpl_db = 25.0;
    p.impaired = impaired_variant(p.scenario, true);
    p.schemes = {SchemeId::LSRPA,    SchemeId::Benchmark, SchemeId::RandomPhase,
                 SchemeId::NoRisMmw, SchemeId::NoRisSub6, SchemeId::AdditionalBs};
    p.variable = SweepVariable::RisElements;
    p.values = {10, 25, 50, 100, 200, 350, 500};
    return p;
}

inline const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6"};
    return names;
}

inline Preset make_preset(const std::string& name, int ris_count = 2)
{
    if (ris_count != 2 && name != "fig2")
        throw ValidationError("--ris applies to the fig2 preset only");
    if (name == "fig2")
        return fig2_preset(ris_count);
    if (name == "fig3")
        return fig3_preset();
    if (name == "fig4")
        return fig4_preset();
    if (name == "fig5")
        return fig5_preset();
    if (name == "fig6")
        return fig6_preset();
    throw ValidationError("unknown preset '" + name + "' (expected fig2, fig3, fig4, fig5 or fig6)");
}

}  // namespace rissim
