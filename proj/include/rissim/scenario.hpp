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

#include "rissim/errors.hpp"
#include "rissim/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rissim {

/// Transceiver distortion-noise model. The coefficients scale the received
/// signal power into additive distortion at the transmitter and receiver.
struct ImpairmentSpec
{
    double kappa_tx_sq = 0.05 * 0.05;
    double kappa_rx_sq = 0.05 * 0.05;
    bool enabled = false;

    double total() const { return enabled ? kappa_tx_sq + kappa_rx_sq : 0.0; }
};

struct RisSpec
{
    Vec3 position = Vec3::Zero();
    int n_elements = 200;
    double element_spacing = 0.5;  // wavelengths
    double phase_noise_bound = 0.0;  // radians, uniform on [-bound, bound]
    /// Aperture gain of one controllable element, applied once per hop.
    double element_gain_db = 16.5;
};

/// Network-controlled amplify-and-forward repeater.
struct RepeaterSpec
{
    Vec3 position = Vec3::Zero();
    int antennas = 4;
    double tx_power_dbm = 32.0;
};

/// Cooperating base station used by the handover scheme.
struct BsSpec
{
    Vec3 position = Vec3::Zero();
    int antennas = 256;
};

/// Sub-6 GHz fallback band of the serving BS.
struct Sub6Spec
{
    double carrier_freq = 2.8e9;
    double bandwidth = 5e6;
    double vpl_db = 20.0;
    int bs_antennas = 16;
    double pathloss_exponent = 2.7;
    double k_factor_db = 6.0;
};

struct ChannelParams
{
    double exponent_direct = 2.0;
    double exponent_bs_ris = 2.0;
    double exponent_ris_ue = 2.0;
    double exponent_repeater = 2.0;
    double exponent_extra_bs = 2.0;
    double k_direct_db = 6.0;
    double k_ris_db = 10.0;
    double k_repeater_db = 10.0;
    double antenna_spacing = 0.5;  // wavelengths, BS/UE/repeater ULAs
};

enum class ThroughputMode
{
    Adaptive,  // a non-outage slot delivers its Shannon rate
    Fixed,     // a non-outage slot delivers threshold x bandwidth
};

struct SchemeParams
{
    int prediction_horizon_slots = 10;
    int report_interval_slots = 1;
    double prediction_noise_std = 0.0;  // meters, Gaussian, along x
    int handover_penalty_slots = 0;
    double csit_overhead_per_path = 0.0;  // fraction of a slot per measured path
    ThroughputMode throughput_mode = ThroughputMode::Adaptive;
    int max_iters = 50;
    double tol = 1e-6;
};

struct RegionGridSpec
{
    double step = 2.0;
    double x_min = 0.0;
    double x_max = 400.0;
    bool monte_carlo = false;
    int mc_draws = 1000;
};

struct Scenario
{
    double carrier_freq = 28e9;
    double bandwidth = 10e6;
    Vec3 bs_position = Vec3(0.0, 20.0, 10.0);
    int bs_antennas = 16;
    int ue_antennas = 4;
    std::vector<RisSpec> ris_list;
    std::vector<RepeaterSpec> repeater_list;
    std::optional<BsSpec> extra_bs;
    std::optional<Sub6Spec> sub6;
    double tx_power_dbm = 30.0;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 9.0;
    double vpl_db = 40.0;
    double rate_threshold = 0.0;  // bit/s/Hz
    double slot_duration = 0.01;
    ImpairmentSpec impairments;
    std::uint64_t seed = 1;

    Pose ue_start;
    std::optional<BlockerBox> blocker;

    ChannelParams channel;
    SchemeParams schemes;
    RegionGridSpec region_grid;

    /// Throws ValidationError naming the first violated invariant.
    void validate() const;
};

inline void Scenario::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok)
            throw ValidationError(what);
    };
    require(carrier_freq > 0.0, "carrier_freq > 0");
    require(bandwidth > 0.0, "bandwidth > 0");
    require(bs_antennas >= 1, "bs_antennas >= 1");
    require(ue_antennas >= 1, "ue_antennas >= 1");
    require(vpl_db >= 0.0, "vpl >= 0");
    require(slot_duration > 0.0, "slot_duration > 0");
    require(rate_threshold >= 0.0, "rate_threshold >= 0");
    require(std::isfinite(tx_power_dbm), "tx_power finite");
    require(bs_position.allFinite(), "bs_position finite");
    require(ue_start.finite(), "ue pose finite");
    require(impairments.kappa_tx_sq >= 0.0, "kappa_tx_sq >= 0");
    require(impairments.kappa_rx_sq >= 0.0, "kappa_rx_sq >= 0");
    for (std::size_t i = 0; i < ris_list.size(); ++i)
    {
        const auto& r = ris_list[i];
        const std::string tag = "ris " + std::to_string(i + 1) + ": ";
        require(r.n_elements >= 1, tag + "n_elements >= 1");
        require(r.element_spacing > 0.0, tag + "element_spacing > 0");
        require(r.phase_noise_bound >= 0.0 && r.phase_noise_bound <= std::numbers::pi,
                tag + "phase_noise_bound in [0, pi]");
        require(r.position.allFinite(), tag + "position finite");
        require((r.position - bs_position).norm() > 1e-9, tag + "position distinct from bs_position");
    }
    for (std::size_t i = 0; i < repeater_list.size(); ++i)
    {
        const auto& r = repeater_list[i];
        const std::string tag = "repeater " + std::to_string(i + 1) + ": ";
        require(r.antennas >= 1, tag + "antennas >= 1");
        require((r.position - bs_position).norm() > 1e-9, tag + "position distinct from bs_position");
    }
    if (extra_bs)
        require(extra_bs->antennas >= 1, "extra_bs antennas >= 1");
    if (sub6)
    {
        require(sub6->carrier_freq > 0.0, "sub6 carrier_freq > 0");
        require(sub6->bandwidth > 0.0, "sub6 bandwidth > 0");
        require(sub6->vpl_db >= 0.0, "sub6 vpl >= 0");
        require(sub6->bs_antennas >= 1, "sub6 bs_antennas >= 1");
        require(sub6->pathloss_exponent >= 2.0, "sub6 pathloss_exponent >= 2");
    }
    if (blocker)
        require(blocker->valid(), "blocker dimensions > 0");
    const auto& c = channel;
    require(c.exponent_direct >= 2.0 && c.exponent_bs_ris >= 2.0 && c.exponent_ris_ue >= 2.0 &&
                c.exponent_repeater >= 2.0 && c.exponent_extra_bs >= 2.0,
            "path-loss exponents >= 2");
    require(c.antenna_spacing > 0.0, "antenna_spacing > 0");
    const auto& s = schemes;
    require(s.prediction_horizon_slots >= 0, "prediction_horizon_slots >= 0");
    require(s.report_interval_slots >= 1, "report_interval_slots >= 1");
    require(s.prediction_noise_std >= 0.0, "prediction_noise_std >= 0");
    require(s.handover_penalty_slots >= 0, "handover_penalty_slots >= 0");
    require(s.csit_overhead_per_path >= 0.0 && s.csit_overhead_per_path < 1.0, "csit_overhead_per_path in [0, 1)");
    require(s.max_iters >= 1, "max_iters >= 1");
    require(s.tol >= 0.0, "tol >= 0");
    require(region_grid.step > 0.0, "regionmap step > 0");
    require(region_grid.x_max > region_grid.x_min, "regionmap x range non-empty");
    require(region_grid.mc_draws >= 1, "regionmap mc_draws >= 1");
}

/// Roadside mounting point at a given straight-line hop distance from the BS,
/// placed downstream (+x) at lateral offset y and height z.
inline Vec3 roadside_at_hop_distance(const Vec3& bs, double hop, double y, double z)
{
    const double dy = y - bs.y();
    const double dz = z - bs.z();
    const double dx2 = hop * hop - dy * dy - dz * dz;
    if (dx2 < 0.0)
        throw ValidationError("hop distance shorter than the lateral/vertical offset");
    return Vec3(bs.x() + std::sqrt(dx2), y, z);
}

/// Highway geometry shared by every preset: BS at (0, 20, 10), two roadside
/// RIS at 200 m and 126 m hops, co-located repeaters, a cooperating BS 1500 m
/// down the road, a sub-6 fallback band, and a truck in the adjacent lane that
/// keeps the UE's direct link shadowed for the default 2 s trial.
inline Scenario default_scenario()
{
    Scenario s;
    const double ris_y = 15.0;
    const double ris_z = 5.0;
    for (double hop : {200.0, 126.0})
    {
        RisSpec r;
        r.position = roadside_at_hop_distance(s.bs_position, hop, ris_y, ris_z);
        s.ris_list.push_back(r);
        RepeaterSpec rep;
        rep.position = r.position;
        s.repeater_list.push_back(rep);
    }
    s.extra_bs = BsSpec{Vec3(s.bs_position.x() + 1500.0, s.bs_position.y(), s.bs_position.z()), 256};
    s.sub6 = Sub6Spec{};
    s.ue_start = Pose{Vec3(150.0, 0.0, 1.5), Vec3(30.0, 0.0, 0.0)};
    BlockerBox truck;
    truck.pose = Pose{Vec3(128.0, 3.5, 0.0), Vec3(20.0, 0.0, 0.0)};
    s.blocker = truck;
    return s;
}

/// Per-link blockage flags for one geometry snapshot.
struct LinkBlockage
{
    bool direct = false;
    std::vector<bool> bs_ris;
    std::vector<bool> ris_ue;
    std::vector<bool> repeater_hop1;
    std::vector<bool> repeater_hop2;
    bool extra_bs = false;

    bool any() const
    {
        auto has = [](const std::vector<bool>& v) {
            for (bool b : v)
                if (b)
                    return true;
            return false;
        };
        return direct || extra_bs || has(bs_ris) || has(ris_ue) || has(repeater_hop1) || has(repeater_hop2);
    }
};

inline LinkBlockage los_state(const Scenario& s, const Vec3& ue, const std::optional<BlockerBox>& blocker)
{
    LinkBlockage out;
    out.bs_ris.assign(s.ris_list.size(), false);
    out.ris_ue.assign(s.ris_list.size(), false);
    out.repeater_hop1.assign(s.repeater_list.size(), false);
    out.repeater_hop2.assign(s.repeater_list.size(), false);
    if (!blocker)
        return out;
    const BlockerBox& b = *blocker;
    out.direct = is_blocked(s.bs_position, ue, b);
    for (std::size_t i = 0; i < s.ris_list.size(); ++i)
    {
        out.bs_ris[i] = is_blocked(s.bs_position, s.ris_list[i].position, b);
        out.ris_ue[i] = is_blocked(s.ris_list[i].position, ue, b);
    }
    for (std::size_t i = 0; i < s.repeater_list.size(); ++i)
    {
        out.repeater_hop1[i] = is_blocked(s.bs_position, s.repeater_list[i].position, b);
        out.repeater_hop2[i] = is_blocked(s.repeater_list[i].position, ue, b);
    }
    if (s.extra_bs)
        out.extra_bs = is_blocked(s.extra_bs->position, ue, b);
    return out;
}

inline LinkBlockage los_state(const Scenario& s, const Pose& ue, const std::optional<BlockerBox>& blocker)
{
    return los_state(s, ue.position, blocker);
}

}  // namespace rissim
