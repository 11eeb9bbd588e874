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
#include "rissim/regionmap.hpp"
#include "rissim/rng.hpp"
#include "rissim/scenario.hpp"
#include "rissim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rissim {

/// Exactly rounded floating-point sum (Shewchuk partials). The result does not
/// depend on insertion order, so merged batches equal the unsplit sum bit for bit.
class ExactSum
{
public:
    void add(double x)
    {
        std::size_t i = 0;
        for (double y : partials_)
        {
            if (std::abs(x) < std::abs(y))
                std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0)
                partials_[i++] = lo;
            x = hi;
        }
        partials_.resize(i);
        partials_.push_back(x);
    }

    void merge(const ExactSum& other)
    {
        for (double p : other.partials_)
            add(p);
    }

    double value() const
    {
        if (partials_.empty())
            return 0.0;
        // Round the expansion to nearest, as math.fsum does.
        std::size_t n = partials_.size();
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0)
        {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0)
                break;
        }
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0)))
        {
            const double y = lo * 2.0;
            const double x = hi + y;
            if (y == x - hi)
                hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;
};

/// Running slot statistics for one (sweep value, scheme) cell.
class MetricsAccumulator
{
public:
    void add(const SlotResult& r)
    {
        ++n_;
        delivered_.add(r.delivered);
        delivered_sq_.add(r.delivered * r.delivered);
        se_.add(r.spectral_efficiency);
        if (r.outage)
            ++outages_;
    }

    void merge(const MetricsAccumulator& o)
    {
        n_ += o.n_;
        outages_ += o.outages_;
        delivered_.merge(o.delivered_);
        delivered_sq_.merge(o.delivered_sq_);
        se_.merge(o.se_);
    }

    std::size_t count() const { return n_; }
    double throughput() const { return n_ ? delivered_.value() / static_cast<double>(n_) : 0.0; }
    double outage_probability() const { return n_ ? static_cast<double>(outages_) / static_cast<double>(n_) : 0.0; }
    double mean_spectral_efficiency() const { return n_ ? se_.value() / static_cast<double>(n_) : 0.0; }

    /// 1.96 sample standard deviations of the per-slot throughput over sqrt(n).
    double ci_halfwidth() const
    {
        if (n_ < 2)
            return 0.0;
        const double n = static_cast<double>(n_);
        const double mean = delivered_.value() / n;
        const double var = std::max(0.0, (delivered_sq_.value() - n * mean * mean) / (n - 1.0));
        return 1.96 * std::sqrt(var) / std::sqrt(n);
    }

private:
    std::size_t n_ = 0;
    std::size_t outages_ = 0;
    ExactSum delivered_;
    ExactSum delivered_sq_;
    ExactSum se_;
};

struct MetricsRow
{
    double sweep_value = 0.0;
    SchemeId scheme = SchemeId::LSRPA;
    double throughput_bps = 0.0;
    double outage_prob = 0.0;
    double mean_se_bpshz = 0.0;
    std::size_t n_slots = 0;
    double ci_halfwidth_bps = 0.0;
};

struct MetricsTable
{
    std::string sweep_name;
    std::string unit;
    std::vector<MetricsRow> rows;

    /// Row for (value, scheme); throws std::out_of_range if absent.
    const MetricsRow& at(double value, SchemeId scheme) const
    {
        for (const auto& r : rows)
            if (r.sweep_value == value && r.scheme == scheme)
                return r;
        throw std::out_of_range("MetricsTable: no row for " + std::string(scheme_name(scheme)));
    }

    std::vector<MetricsRow> series(SchemeId scheme) const
    {
        std::vector<MetricsRow> out;
        for (const auto& r : rows)
            if (r.scheme == scheme)
                out.push_back(r);
        return out;
    }
};

inline MetricsRow to_row(const MetricsAccumulator& acc, double value, SchemeId scheme)
{
    return MetricsRow{value,
                      scheme,
                      acc.throughput(),
                      acc.outage_probability(),
                      acc.mean_spectral_efficiency(),
                      acc.count(),
                      acc.ci_halfwidth()};
}

/// Throughput, outage and mean spectral efficiency of a slot sequence.
inline MetricsRow aggregate(const std::vector<SlotResult>& results)
{
    if (results.empty())
        throw std::invalid_argument("aggregate: no slot results");
    MetricsAccumulator acc;
    for (const auto& r : results)
        acc.add(r);
    return to_row(acc, 0.0, results.front().scheme);
}

/// Stream root for one trial. Neither the scheme nor the sweep value enters
/// the key, so every scheme at every sweep value sees the same fading.
inline StreamKey trial_key(std::uint64_t seed, int trial)
{
    return StreamKey(seed).derive("trial").derive(static_cast<std::uint64_t>(trial));
}

/// Slot whose report feeds the prediction for `slot`.
inline int report_slot_for(int slot, const SchemeParams& p)
{
    const int h = p.prediction_horizon_slots;
    const int i = p.report_interval_slots;
    if (slot < h)
        return 0;
    return ((slot - h) / i) * i;
}

/// Vehicle poses per slot, plus the positions LSRPA predicted for each slot.
inline std::vector<SlotState> trajectory_states(const Scenario& s, int n_slots, const StreamKey& trial)
{
    if (n_slots < 1)
        throw std::invalid_argument("n_slots >= 1");
    const double dt = s.slot_duration;
    std::vector<SlotState> out(static_cast<std::size_t>(n_slots));
    for (int t = 0; t < n_slots; ++t)
    {
        SlotState& st = out[static_cast<std::size_t>(t)];
        st.slot = t;
        st.ue = advance(s.ue_start, t * dt);
        if (s.blocker)
            st.blocker = s.blocker->advanced(t * dt);

        const int r = report_slot_for(t, s.schemes);
        PredictionInput in;
        in.ue_pose_at_report = advance(s.ue_start, r * dt);
        if (s.blocker)
            in.blocker_pose_at_report = s.blocker->advanced(r * dt).pose;
        in.report_slot = r;
        in.target_slot = t;
        Prediction p = predict(in, dt);
        if (s.schemes.prediction_noise_std > 0.0)
        {
            Engine rng = trial.derive(streams::prediction, static_cast<std::uint64_t>(t)).engine();
            std::normal_distribution<double> err(0.0, s.schemes.prediction_noise_std);
            p.ue_position.x() += err(rng);
            if (p.blocker_position)
                p.blocker_position->x() += err(rng);
        }
        st.predicted_ue = p.ue_position;
        st.predicted_blocker = p.blocker_position;
    }
    return out;
}

inline bool needs_region_map(const std::vector<SchemeId>& schemes)
{
    return std::any_of(schemes.begin(), schemes.end(),
                       [](SchemeId id) { return id == SchemeId::LSRPA || id == SchemeId::RandomPhase; });
}

/// Power-independent per-slot plans of every scheme in one trial.
struct TrialPlan
{
    std::vector<SlotState> states;
    std::vector<bool> blocked_direct;
    std::vector<SchemeId> schemes;
    std::vector<std::vector<SlotPlan>> plans;  // [scheme][slot]
};

inline TrialPlan plan_trial(const Scenario& s, const std::vector<SchemeId>& schemes, int n_slots,
                            const StreamKey& trial, const RegionMap* map)
{
    for (SchemeId id : schemes)
        check_scheme_supported(id, s);
    if (needs_region_map(schemes) && (!map || map->empty()))
        throw std::logic_error("plan_trial: LSRPA-family schemes need a region map");

    TrialPlan tp;
    tp.states = trajectory_states(s, n_slots, trial);
    tp.schemes = schemes;
    tp.plans.assign(schemes.size(), std::vector<SlotPlan>(static_cast<std::size_t>(n_slots)));
    tp.blocked_direct.resize(static_cast<std::size_t>(n_slots));
    const LinkMask mask = link_mask_for(schemes);
    for (int t = 0; t < n_slots; ++t)
    {
        const auto ts = static_cast<std::size_t>(t);
        const SlotState& st = tp.states[ts];
        const StreamKey slot_key = trial.derive(static_cast<std::uint64_t>(t));
        const ChannelRealization ch = realize_channels(s, st.ue, st.blocker, slot_key, mask);
        tp.blocked_direct[ts] = ch.blockage.direct;
        SlotContext ctx(s, ch, map, slot_key);
        for (std::size_t k = 0; k < schemes.size(); ++k)
            tp.plans[k][ts] = plan_slot(schemes[k], st, ctx);
    }
    return tp;
}

/// Slot results of one scheme at a given transmit power. A path change costs
/// `handover_penalty_slots` slots of zero delivered throughput.
inline std::vector<SlotResult> evaluate_trial(const Scenario& s, const TrialPlan& tp, std::size_t scheme_index,
                                              double tx_power_dbm)
{
    const SchemeId id = tp.schemes.at(scheme_index);
    const auto& plans = tp.plans[scheme_index];
    std::vector<SlotResult> out;
    out.reserve(plans.size());
    std::optional<PathCandidate> previous;
    int penalty_left = 0;
    for (std::size_t t = 0; t < plans.size(); ++t)
    {
        const SlotOutcome o = evaluate_plan(plans[t], tx_power_dbm, s.impairments, s.schemes.csit_overhead_per_path);
        SlotResult r = finish_slot(s, id, static_cast<int>(t), o, tp.blocked_direct[t]);
        if (previous && *previous != r.path)
            penalty_left = s.schemes.handover_penalty_slots;
        previous = r.path;
        if (penalty_left > 0)
        {
            r.delivered = 0.0;
            --penalty_left;
        }
        out.push_back(r);
    }
    return out;
}

/// One trial of one scheme at the scenario's own transmit power.
inline std::vector<SlotResult> run_trial(const Scenario& s, SchemeId scheme, int n_slots, const StreamKey& trial,
                                         const RegionMap* map = nullptr)
{
    std::optional<RegionMap> local;
    if (needs_region_map({scheme}) && !map)
        map = &local.emplace(build_region_map(s));
    const TrialPlan tp = plan_trial(s, {scheme}, n_slots, trial, map);
    return evaluate_trial(s, tp, 0, s.tx_power_dbm);
}

// ---------------------------------------------------------------- sweeps

enum class SweepVariable
{
    TxPower,
    RisElements,
    PhaseNoiseBound,
    Vpl,
};

inline std::string_view sweep_variable_name(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::TxPower: return "tx_power_dbm";
    case SweepVariable::RisElements: return "ris_elements";
    case SweepVariable::PhaseNoiseBound: return "phase_noise_bound";
    case SweepVariable::Vpl: return "vpl_db";
    }
    return "?";
}

inline std::string_view sweep_variable_unit(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::TxPower: return "dBm";
    case SweepVariable::RisElements: return "elements";
    case SweepVariable::PhaseNoiseBound: return "rad";
    case SweepVariable::Vpl: return "dB";
    }
    return "";
}

inline SweepVariable parse_sweep_variable(std::string_view name)
{
    for (SweepVariable v : {SweepVariable::TxPower, SweepVariable::RisElements, SweepVariable::PhaseNoiseBound,
                            SweepVariable::Vpl})
        if (sweep_variable_name(v) == name)
            return v;
    throw ConfigurationError("unknown sweep variable '" + std::string(name) +
                             "' (expected tx_power_dbm, ris_elements, phase_noise_bound or vpl_db)");
}

inline Scenario with_sweep_value(Scenario s, SweepVariable v, double value)
{
    switch (v)
    {
    case SweepVariable::TxPower: s.tx_power_dbm = value; break;
    case SweepVariable::RisElements:
        if (value < 1.0 || value != std::floor(value))
            throw ValidationError("ris_elements must be a positive integer");
        for (auto& r : s.ris_list)
            r.n_elements = static_cast<int>(value);
        break;
    case SweepVariable::PhaseNoiseBound:
        for (auto& r : s.ris_list)
            r.phase_noise_bound = value;
        break;
    case SweepVariable::Vpl: s.vpl_db = value; break;
    }
    s.validate();
    return s;
}

using RegionMapProvider = std::function<RegionMap(const Scenario&)>;

struct SweepOptions
{
    int trials = 1;
    int n_slots = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
    RegionMapProvider region_map;  // empty = build_region_map(scenario)
};

namespace detail {

/// Runs work(trial) for trial in [0, trials) on a pool; rethrows the first error.
inline void parallel_trials(int trials, unsigned threads, const std::function<void(int)>& work)
{
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max(trials, 1)));
    if (n <= 1)
    {
        for (int t = 0; t < trials; ++t)
            work(t);
        return;
    }
    std::mutex m;
    std::exception_ptr error;
    int next = 0;
    auto loop = [&] {
        for (;;)
        {
            int t;
            {
                std::lock_guard lock(m);
                if (error || next >= trials)
                    return;
                t = next++;
            }
            try
            {
                work(t);
            }
            catch (...)
            {
                std::lock_guard lock(m);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i)
        pool.emplace_back(loop);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace detail

/// Monte Carlo sweep. Power sweeps share one beamforming pass per trial across
/// all power values; other variables re-plan per value. Per-trial accumulators
/// are merged exactly, so the table does not depend on thread scheduling.
inline MetricsTable sweep(const Scenario& base, const std::vector<SchemeId>& schemes, SweepVariable variable,
                          const std::vector<double>& values, const SweepOptions& opt)
{
    if (values.empty())
        throw ValidationError("sweep values must be non-empty");
    if (schemes.empty())
        throw ValidationError("scheme list must be non-empty");
    if (opt.trials < 1)
        throw ValidationError("trials >= 1");
    if (opt.n_slots < 1)
        throw ValidationError("slots >= 1");
    base.validate();
    for (SchemeId id : schemes)
        check_scheme_supported(id, base);

    const std::size_t nv = values.size();
    const std::size_t ns = schemes.size();
    std::vector<Scenario> scenarios;
    for (double v : values)
        scenarios.push_back(with_sweep_value(base, variable, v));

    const bool power_only = variable == SweepVariable::TxPower;
    std::vector<std::optional<RegionMap>> maps(power_only ? 1 : nv);
    if (needs_region_map(schemes))
        for (std::size_t i = 0; i < maps.size(); ++i)
        {
            const Scenario& s = power_only ? base : scenarios[i];
            maps[i] = opt.region_map ? opt.region_map(s) : build_region_map(s);
        }
    auto map_for = [&](std::size_t i) -> const RegionMap* {
        const auto& m = maps[power_only ? 0 : i];
        return m ? &*m : nullptr;
    };

    std::vector<MetricsAccumulator> per_trial(static_cast<std::size_t>(opt.trials) * nv * ns);
    auto cell = [&](int trial, std::size_t v, std::size_t k) -> MetricsAccumulator& {
        return per_trial[(static_cast<std::size_t>(trial) * nv + v) * ns + k];
    };

    detail::parallel_trials(opt.trials, opt.threads, [&](int trial) {
        const StreamKey key = trial_key(opt.seed, trial);
        std::optional<TrialPlan> shared;
        if (power_only)
            shared = plan_trial(base, schemes, opt.n_slots, key, map_for(0));
        for (std::size_t v = 0; v < nv; ++v)
        {
            const Scenario& s = scenarios[v];
            std::optional<TrialPlan> own;
            if (!power_only)
                own = plan_trial(s, schemes, opt.n_slots, key, map_for(v));
            const TrialPlan& tp = power_only ? *shared : *own;
            for (std::size_t k = 0; k < ns; ++k)
                for (const SlotResult& r : evaluate_trial(s, tp, k, s.tx_power_dbm))
                    cell(trial, v, k).add(r);
        }
    });

    MetricsTable table;
    table.sweep_name = std::string(sweep_variable_name(variable));
    table.unit = std::string(sweep_variable_unit(variable));
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t k = 0; k < ns; ++k)
        {
            MetricsAccumulator acc;
            for (int t = 0; t < opt.trials; ++t)
                acc.merge(cell(t, v, k));
            table.rows.push_back(to_row(acc, values[v], schemes[k]));
        }
    return table;
}

struct TrajectoryRow
{
    int slot = 0;
    double time_s = 0.0;
    double ue_x = 0.0;
    std::optional<double> blocker_x;
    bool blocked_direct = false;
    SchemeId scheme = SchemeId::LSRPA;
    PathCandidate path;
    double se_bpshz = 0.0;
    double rate_bps = 0.0;
    bool outage = false;
};

/// Per-slot rates of every scheme along trial 0's trajectory, slot-major.
inline std::vector<TrajectoryRow> trajectory_snapshot(const Scenario& s, const std::vector<SchemeId>& schemes,
                                                      int n_slots, std::uint64_t seed,
                                                      const RegionMap* map = nullptr)
{
    s.validate();
    std::optional<RegionMap> local;
    if (needs_region_map(schemes) && !map)
        map = &local.emplace(build_region_map(s));
    const TrialPlan tp = plan_trial(s, schemes, n_slots, trial_key(seed, 0), map);
    std::vector<std::vector<SlotResult>> per_scheme;
    for (std::size_t k = 0; k < schemes.size(); ++k)
        per_scheme.push_back(evaluate_trial(s, tp, k, s.tx_power_dbm));

    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(n_slots) * schemes.size());
    for (int t = 0; t < n_slots; ++t)
    {
        const auto ts = static_cast<std::size_t>(t);
        const SlotState& st = tp.states[ts];
        for (std::size_t k = 0; k < schemes.size(); ++k)
        {
            const SlotResult& r = per_scheme[k][ts];
            TrajectoryRow row;
            row.slot = t;
            row.time_s = t * s.slot_duration;
            row.ue_x = st.ue.position.x();
            if (st.blocker)
                row.blocker_x = st.blocker->pose.position.x();
            row.blocked_direct = r.blocked_direct;
            row.scheme = r.scheme;
            row.path = r.path;
            row.se_bpshz = r.spectral_efficiency;
            row.rate_bps = r.rate;
            row.outage = r.outage;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace rissim
