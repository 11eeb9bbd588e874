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

#include "rissim/channel.hpp"
#include "rissim/errors.hpp"
#include "rissim/path.hpp"
#include "rissim/phy.hpp"
#include "rissim/regionmap.hpp"
#include "rissim/rng.hpp"
#include "rissim/scenario.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rissim {

enum class SchemeId
{
    LSRPA,         // region-map pre-selection, CSIT of the chosen path only
    Benchmark,     // genie: CSIT of every path, best instantaneous rate
    RandomPhase,   // LSRPA's path, unoptimized RIS phases
    NoRisMmw,      // direct link at mmWave
    NoRisSub6,     // direct link on the sub-6 fallback band
    AdditionalBs,  // handover between the serving and a cooperating BS
    Repeater,      // best of direct and amplify-and-forward repeaters
};

inline constexpr std::array<SchemeId, 7> all_schemes{SchemeId::LSRPA,     SchemeId::Benchmark,    SchemeId::RandomPhase,
                                                     SchemeId::NoRisMmw,  SchemeId::NoRisSub6,    SchemeId::AdditionalBs,
                                                     SchemeId::Repeater};

inline constexpr std::string_view scheme_name(SchemeId id)
{
    switch (id)
    {
    case SchemeId::LSRPA: return "LSRPA";
    case SchemeId::Benchmark: return "Benchmark";
    case SchemeId::RandomPhase: return "RandomPhase";
    case SchemeId::NoRisMmw: return "NoRisMmw";
    case SchemeId::NoRisSub6: return "NoRisSub6";
    case SchemeId::AdditionalBs: return "AdditionalBs";
    case SchemeId::Repeater: return "Repeater";
    }
    return "?";
}

inline SchemeId parse_scheme(std::string_view name)
{
    for (SchemeId id : all_schemes)
        if (scheme_name(id) == name)
            return id;
    throw ConfigurationError("unknown scheme '" + std::string(name) + "'");
}

/// Whether the scheme runs over RIS hardware (and so sees its impairments).
inline constexpr bool uses_ris(SchemeId id)
{
    return id == SchemeId::LSRPA || id == SchemeId::Benchmark || id == SchemeId::RandomPhase;
}

/// Throws ConfigurationError if the scenario lacks an entity the scheme needs.
inline void check_scheme_supported(SchemeId id, const Scenario& s)
{
    switch (id)
    {
    case SchemeId::NoRisSub6:
        if (!s.sub6)
            throw ConfigurationError("NoRisSub6 needs a [sub6] fallback block");
        break;
    case SchemeId::AdditionalBs:
        if (!s.extra_bs)
            throw ConfigurationError("AdditionalBs needs an [extra_bs] block");
        break;
    case SchemeId::Repeater:
        if (s.repeater_list.empty())
            throw ConfigurationError("Repeater needs at least one [repeater] block");
        break;
    default: break;
    }
}

/// Links a set of schemes needs drawn each slot.
inline LinkMask link_mask_for(const std::vector<SchemeId>& schemes)
{
    LinkMask m = LinkMask::none();
    for (SchemeId id : schemes)
    {
        m.direct = true;
        if (uses_ris(id))
            m.ris = true;
        if (id == SchemeId::NoRisSub6)
            m.sub6 = true;
        if (id == SchemeId::AdditionalBs)
            m.extra_bs = true;
        if (id == SchemeId::Repeater)
            m.repeaters = true;
    }
    return m;
}

/// Band a link option is evaluated in.
struct Band
{
    double bandwidth = 0.0;
    double noise_dbm = 0.0;
};

/// One servable alternative in a slot. Its rate is a function of the BS
/// transmit power only, which lets a power sweep reuse one beamforming pass.
struct LinkOption
{
    PathCandidate path;
    double gain = 0.0;  // single-stream power gain of the (first) hop
    std::optional<double> relay_gain;  // second amplify-and-forward hop, if any
    double relay_power_dbm = 0.0;
    Band band;
    bool impaired = false;
};

struct SlotPlan
{
    std::vector<LinkOption> options;  // tie-break order: first wins
    int measured_paths = 1;
};

struct SlotOutcome
{
    PathCandidate path;
    Rate rate;
    double bandwidth = 0.0;
};

inline Rate evaluate_option(const LinkOption& o, double tx_power_dbm, const ImpairmentSpec& imp)
{
    const ImpairmentSpec none{};
    const ImpairmentSpec& use = o.impaired ? imp : none;
    if (!o.relay_gain)
        return shannon_rate(sinr(o.gain, tx_power_dbm, o.band.noise_dbm, use), o.band.bandwidth);
    const double g1 = sinr(o.gain, tx_power_dbm, o.band.noise_dbm, none);
    const double g2 = sinr(*o.relay_gain, o.relay_power_dbm, o.band.noise_dbm, none);
    double e2e = af_snr(g1, g2);
    if (use.enabled)
        e2e = e2e / (e2e * use.total() + 1.0);
    return shannon_rate(e2e, o.band.bandwidth);
}

/// Best option at the given power; CSIT overhead scales the delivered rate.
inline SlotOutcome evaluate_plan(const SlotPlan& plan, double tx_power_dbm, const ImpairmentSpec& imp,
                                 double overhead_per_path = 0.0)
{
    if (plan.options.empty())
        throw std::logic_error("evaluate_plan: empty plan");
    SlotOutcome best;
    bool first = true;
    for (const auto& o : plan.options)
    {
        const Rate r = evaluate_option(o, tx_power_dbm, imp);
        if (first || r.bps > best.rate.bps)
        {
            best = {o.path, r, o.band.bandwidth};
            first = false;
        }
    }
    const double keep = std::max(0.0, 1.0 - overhead_per_path * plan.measured_paths);
    best.rate.bps *= keep;
    best.rate.spectral_efficiency *= keep;
    return best;
}

/// Everything scheme decisions in one slot may read. Optimized links are
/// cached per path so every scheme sees bit-identical beamforming results.
class SlotContext
{
public:
    SlotContext(const Scenario& s, const ChannelRealization& ch, const RegionMap* map, StreamKey slot_key)
        : s_(s), ch_(ch), map_(map), key_(slot_key)
    {
    }

    const Scenario& scenario() const { return s_; }
    const ChannelRealization& channels() const { return ch_; }
    const RegionMap* region_map() const { return map_; }
    const StreamKey& key() const { return key_; }

    Band mmw_band() const { return {s_.bandwidth, noise_power_dbm(s_)}; }

    /// Optimized single-stream link over `path` (Direct, ViaRis, ViaExtraBs).
    /// RIS paths include the hardware's phase noise, applied after optimization
    /// with the beamformers left as designed.
    const BeamformedLink& optimized(const PathCandidate& path)
    {
        auto it = cache_.find(path);
        if (it != cache_.end())
            return it->second;
        return cache_.emplace(path, compute(path)).first->second;
    }

    /// Same path with uniformly random RIS phases and beamformers matched to
    /// the resulting effective channel.
    BeamformedLink random_phase(const PathCandidate& path) const
    {
        if (path.kind != PathCandidate::Kind::ViaRis)
            return optimize_beamforming(ch_.direct.matrix);
        const auto i = static_cast<std::size_t>(path.index);
        Engine rng = key_.derive(streams::random_phase, path.code()).engine();
        const PhaseConfig phases = random_phases(s_.ris_list[i].n_elements, rng);
        const CMatrix h = effective_channel(ch_.direct.matrix, ch_.inbound[i].matrix, phases, ch_.outbound[i].matrix);
        BeamformedLink out = optimize_beamforming(h);
        out.phase_config = phases;
        return out;
    }

private:
    BeamformedLink compute(const PathCandidate& path) const
    {
        switch (path.kind)
        {
        case PathCandidate::Kind::Direct: return optimize_beamforming(ch_.direct.matrix);
        case PathCandidate::Kind::ViaExtraBs:
            if (!ch_.extra_bs_direct)
                throw ConfigurationError("extra BS link not realized");
            return optimize_beamforming(ch_.extra_bs_direct->matrix);
        case PathCandidate::Kind::ViaRis: {
            const auto i = static_cast<std::size_t>(path.index);
            if (path.index < 0 || i >= ch_.inbound.size())
                throw ConfigurationError("RIS index out of range for this realization");
            const OptimizerOptions opt{s_.schemes.max_iters, s_.schemes.tol};
            BeamformedLink link =
                optimize_beamforming(ch_.direct.matrix, ch_.inbound[i].matrix, ch_.outbound[i].matrix, opt);
            const double bound = s_.ris_list[i].phase_noise_bound;
            if (bound > 0.0 && link.phase_config)
            {
                Engine rng = key_.derive(streams::phase_noise, path.code()).engine();
                const PhaseConfig noisy = apply_phase_noise(*link.phase_config, bound, rng);
                link.effective_gain = beamformed_gain(ch_.direct.matrix, ch_.inbound[i].matrix, noisy,
                                                      ch_.outbound[i].matrix, link.precoder, link.combiner);
                link.phase_config = noisy;
            }
            return link;
        }
        case PathCandidate::Kind::ViaRepeater: break;
        }
        throw std::invalid_argument("optimized(): repeater paths are beamformed per hop");
    }

    const Scenario& s_;
    const ChannelRealization& ch_;
    const RegionMap* map_;
    StreamKey key_;
    std::map<PathCandidate, BeamformedLink> cache_;
};

/// Per-slot vehicle state plus the positions LSRPA predicted for this slot.
struct SlotState
{
    int slot = 0;
    Pose ue;
    std::optional<BlockerBox> blocker;
    Vec3 predicted_ue = Vec3::Zero();
    std::optional<Vec3> predicted_blocker;
};

/// Region-map lookup on predicted positions.
inline PathCandidate decide_lsrpa(const RegionMap& map, const Vec3& predicted_ue,
                                  const std::optional<Vec3>& predicted_blocker)
{
    if (map.empty())
        throw std::logic_error("decide_lsrpa: empty region map");
    return map.lookup(predicted_ue.x(),
                      predicted_blocker ? std::optional<double>(predicted_blocker->x()) : std::nullopt);
}

/// Power-independent description of what a scheme would do in this slot.
inline SlotPlan plan_slot(SchemeId scheme, const SlotState& state, SlotContext& ctx)
{
    const Scenario& s = ctx.scenario();
    check_scheme_supported(scheme, s);
    const bool ris_impaired = s.impairments.enabled;
    SlotPlan plan;
    auto add = [&](const PathCandidate& p, double gain, bool impaired) {
        plan.options.push_back(LinkOption{p, gain, std::nullopt, 0.0, ctx.mmw_band(), impaired});
    };
    auto lsrpa_path = [&] {
        if (!ctx.region_map())
            throw std::logic_error("LSRPA needs a region map");
        return decide_lsrpa(*ctx.region_map(), state.predicted_ue, state.predicted_blocker);
    };

    switch (scheme)
    {
    case SchemeId::LSRPA: {
        const PathCandidate p = lsrpa_path();
        add(p, ctx.optimized(p).effective_gain, ris_impaired);
        plan.measured_paths = 1;
        break;
    }
    case SchemeId::Benchmark: {
        add(PathCandidate::direct(), ctx.optimized(PathCandidate::direct()).effective_gain, ris_impaired);
        for (std::size_t i = 0; i < s.ris_list.size(); ++i)
        {
            const auto p = PathCandidate::via_ris(static_cast<int>(i));
            add(p, ctx.optimized(p).effective_gain, ris_impaired);
        }
        plan.measured_paths = static_cast<int>(plan.options.size());
        break;
    }
    case SchemeId::RandomPhase: {
        const PathCandidate p = lsrpa_path();
        const double g = p.kind == PathCandidate::Kind::ViaRis ? ctx.random_phase(p).effective_gain
                                                                : ctx.optimized(p).effective_gain;
        add(p, g, ris_impaired);
        plan.measured_paths = 1;
        break;
    }
    case SchemeId::NoRisMmw:
        add(PathCandidate::direct(), ctx.optimized(PathCandidate::direct()).effective_gain, false);
        break;
    case SchemeId::NoRisSub6: {
        const auto& sub6 = ctx.channels().sub6_direct;
        if (!sub6)
            throw ConfigurationError("sub-6 link not realized");
        const Band band{s.sub6->bandwidth, noise_power_dbm(s.noise_psd_dbm_hz, s.sub6->bandwidth, s.noise_figure_db)};
        plan.options.push_back(LinkOption{PathCandidate::direct(), optimize_beamforming(sub6->matrix).effective_gain,
                                          std::nullopt, 0.0, band, false});
        break;
    }
    case SchemeId::AdditionalBs:
        add(PathCandidate::direct(), ctx.optimized(PathCandidate::direct()).effective_gain, false);
        add(PathCandidate::via_extra_bs(), ctx.optimized(PathCandidate::via_extra_bs()).effective_gain, false);
        plan.measured_paths = 2;
        break;
    case SchemeId::Repeater: {
        add(PathCandidate::direct(), ctx.optimized(PathCandidate::direct()).effective_gain, false);
        const auto& hops = ctx.channels().repeater_hops;
        if (hops.size() != s.repeater_list.size())
            throw ConfigurationError("repeater links not realized");
        for (std::size_t i = 0; i < hops.size(); ++i)
        {
            LinkOption o;
            o.path = PathCandidate::via_repeater(static_cast<int>(i));
            o.gain = optimize_beamforming(hops[i].first.matrix).effective_gain;
            o.relay_gain = optimize_beamforming(hops[i].second.matrix).effective_gain;
            o.relay_power_dbm = s.repeater_list[i].tx_power_dbm;
            o.band = ctx.mmw_band();
            plan.options.push_back(o);
        }
        plan.measured_paths = static_cast<int>(plan.options.size());
        break;
    }
    }
    return plan;
}

struct SlotResult
{
    int slot = 0;
    SchemeId scheme = SchemeId::LSRPA;
    PathCandidate path;
    double spectral_efficiency = 0.0;
    double rate = 0.0;       // bit/s achieved by the link
    double delivered = 0.0;  // bit/s credited to throughput
    bool outage = false;
    bool blocked_direct = false;
};

/// Applies the outage rule and the throughput accounting mode to an outcome.
inline SlotResult finish_slot(const Scenario& s, SchemeId scheme, int slot, const SlotOutcome& o, bool blocked_direct)
{
    SlotResult r;
    r.slot = slot;
    r.scheme = scheme;
    r.path = o.path;
    r.spectral_efficiency = o.rate.spectral_efficiency;
    r.rate = o.rate.bps;
    r.outage = r.spectral_efficiency < s.rate_threshold;
    r.blocked_direct = blocked_direct;
    if (r.outage)
        r.delivered = 0.0;
    else if (s.schemes.throughput_mode == ThroughputMode::Fixed)
        r.delivered = s.rate_threshold * o.bandwidth;
    else
        r.delivered = r.rate;
    return r;
}

/// Serve one slot with one scheme at the scenario's transmit power.
inline SlotResult serve_slot(SchemeId scheme, const SlotState& state, SlotContext& ctx)
{
    const Scenario& s = ctx.scenario();
    const SlotPlan plan = plan_slot(scheme, state, ctx);
    const SlotOutcome o = evaluate_plan(plan, s.tx_power_dbm, s.impairments, s.schemes.csit_overhead_per_path);
    return finish_slot(s, scheme, state.slot, o, ctx.channels().blockage.direct);
}

/// Genie-aided choice: best instantaneous rate over Direct and every RIS.
inline std::pair<PathCandidate, Rate> decide_benchmark(const ChannelRealization& ch, const Scenario& s,
                                                       const StreamKey& slot_key = StreamKey{})
{
    SlotContext ctx(s, ch, nullptr, slot_key);
    const SlotPlan plan = plan_slot(SchemeId::Benchmark, SlotState{}, ctx);
    const SlotOutcome o = evaluate_plan(plan, s.tx_power_dbm, s.impairments);
    return {o.path, o.rate};
}

}  // namespace rissim
