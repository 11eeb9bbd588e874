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
#include "rissim/diagnostics.hpp"
#include "rissim/path.hpp"
#include "rissim/phy.hpp"
#include "rissim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rissim {

/// Regions of responsibility: for every (blocker cell, UE cell) pair, the
/// candidate path with the best long-term gain.
///
/// Row 0 is the "no blocker" sentinel; row r >= 1 corresponds to blocker_x[r-1].
/// Cells are addressed by nearest center; a query farther than half a step
/// beyond the outermost center is clamped and counted in diagnostics().
struct RegionMap
{
    std::vector<double> ue_x;
    std::vector<double> blocker_x;
    double step = 0.0;
    std::vector<PathCandidate> assignment;  // row-major, rows() x cols()
    std::vector<double> mean_gain_db;

    std::size_t rows() const { return blocker_x.size() + 1; }
    std::size_t cols() const { return ue_x.size(); }
    bool empty() const { return ue_x.empty() || assignment.empty(); }

    const PathCandidate& at(std::size_t row, std::size_t col) const { return assignment.at(row * cols() + col); }
    double gain_at(std::size_t row, std::size_t col) const { return mean_gain_db.at(row * cols() + col); }

    std::size_t ue_cell(double x, bool* clamped = nullptr) const { return nearest(ue_x, x, clamped); }

    /// Row for a blocker position; std::nullopt selects the sentinel row.
    std::size_t blocker_row(std::optional<double> x, bool* clamped = nullptr) const
    {
        if (!x || blocker_x.empty())
        {
            if (clamped)
                *clamped = x.has_value();
            return 0;
        }
        return 1 + nearest(blocker_x, *x, clamped);
    }

    PathCandidate lookup(double ue, std::optional<double> blocker) const
    {
        if (empty())
            throw std::logic_error("region map is empty");
        bool c1 = false;
        bool c2 = false;
        const std::size_t col = ue_cell(ue, &c1);
        const std::size_t row = blocker_row(blocker, &c2);
        if (c1 || c2)
            diagnostics().grid_clamps.fetch_add(1, std::memory_order_relaxed);
        return at(row, col);
    }

private:
    std::size_t nearest(const std::vector<double>& centers, double x, bool* clamped) const
    {
        const double half = 0.5 * step;
        if (clamped)
            *clamped = x < centers.front() - half || x > centers.back() + half;
        auto it = std::lower_bound(centers.begin(), centers.end(), x);
        if (it == centers.end())
            return centers.size() - 1;
        if (it == centers.begin())
            return 0;
        const auto hi = static_cast<std::size_t>(it - centers.begin());
        // ties resolve to the upper cell: cells are half-open [lo, hi)
        return (x - centers[hi - 1] < centers[hi] - x) ? hi - 1 : hi;
    }
};

/// Cell centers of a uniform grid covering [x_min, x_max].
inline std::vector<double> grid_centers(double x_min, double x_max, double step)
{
    if (!(step > 0.0) || !(x_max > x_min))
        throw std::invalid_argument("grid_centers: need step > 0 and a non-empty range");
    const auto n = static_cast<std::size_t>(std::ceil((x_max - x_min) / step - 1e-9));
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = x_min + (static_cast<double>(i) + 0.5) * step;
    return c;
}

/// Geometry a map cell stands for: UE on its lane at antenna height, the
/// scenario's blocker body moved to the cell's x.
inline Vec3 cell_ue_position(const Scenario& s, double x) { return Vec3(x, s.ue_start.position.y(), s.ue_start.position.z()); }

inline std::optional<BlockerBox> cell_blocker(const Scenario& s, std::optional<double> x)
{
    if (!x || !s.blocker)
        return std::nullopt;
    BlockerBox b = *s.blocker;
    b.pose.position.x() = *x;
    return b;
}

/// Candidates the map chooses among: Direct, then every RIS in index order.
inline std::vector<PathCandidate> region_candidates(const Scenario& s)
{
    std::vector<PathCandidate> c{PathCandidate::direct()};
    for (std::size_t i = 0; i < s.ris_list.size(); ++i)
        c.push_back(PathCandidate::via_ris(static_cast<int>(i)));
    return c;
}

namespace detail {

/// Mean optimized gain over fading draws, normalized by the BS x UE array gain.
inline double monte_carlo_gain_db(const Scenario& s, const PathCandidate& p, const Vec3& ue,
                                  const std::optional<BlockerBox>& blocker, int draws, const StreamKey& key)
{
    LinkMask mask = LinkMask::none();
    mask.direct = true;
    mask.ris = p.kind == PathCandidate::Kind::ViaRis;
    const OptimizerOptions opt{s.schemes.max_iters, s.schemes.tol};
    double acc = 0.0;
    for (int d = 0; d < draws; ++d)
    {
        const ChannelRealization ch = realize_channels(s, Pose{ue, Vec3::Zero()}, blocker, key.derive(d), mask);
        if (p.kind == PathCandidate::Kind::Direct)
            acc += optimize_beamforming(ch.direct.matrix).effective_gain;
        else
            acc += optimize_beamforming(CMatrix(), ch.inbound[p.index].matrix, ch.outbound[p.index].matrix, opt)
                       .effective_gain;
    }
    return linear_to_db(acc / draws) - linear_to_db(static_cast<double>(s.bs_antennas) * s.ue_antennas);
}

}  // namespace detail

/// Map over explicit cell centers. With scenario.region_grid.monte_carlo set,
/// cell gains are fading averages of the optimized link instead of the
/// deterministic large-scale gains (slow; meant for validation).
inline RegionMap build_region_map(const Scenario& s, std::vector<double> ue_centers, std::vector<double> blocker_centers,
                                  double step)
{
    if (ue_centers.empty())
        throw std::invalid_argument("build_region_map: no UE cells");
    if (!s.blocker)
        blocker_centers.clear();
    std::sort(ue_centers.begin(), ue_centers.end());
    std::sort(blocker_centers.begin(), blocker_centers.end());

    RegionMap m;
    m.ue_x = std::move(ue_centers);
    m.blocker_x = std::move(blocker_centers);
    m.step = step;
    m.assignment.resize(m.rows() * m.cols());
    m.mean_gain_db.resize(m.rows() * m.cols());

    const auto candidates = region_candidates(s);
    const bool mc = s.region_grid.monte_carlo;
    const StreamKey mc_key = StreamKey(s.seed).derive("regionmap-mc");
    for (std::size_t row = 0; row < m.rows(); ++row)
    {
        const std::optional<double> bx = row == 0 ? std::nullopt : std::optional<double>(m.blocker_x[row - 1]);
        const auto blocker = cell_blocker(s, bx);
        for (std::size_t col = 0; col < m.cols(); ++col)
        {
            const Vec3 ue = cell_ue_position(s, m.ue_x[col]);
            PathCandidate best = candidates.front();
            double best_gain = -std::numeric_limits<double>::infinity();
            for (const auto& p : candidates)
            {
                const double g = mc ? detail::monte_carlo_gain_db(s, p, ue, blocker, s.region_grid.mc_draws,
                                                                  mc_key.derive(row, col, p.code()))
                                    : large_scale_gain_db(s, p, ue, blocker);
                if (g > best_gain)  // strict: ties keep Direct, then the lowest RIS index
                {
                    best_gain = g;
                    best = p;
                }
            }
            m.assignment[row * m.cols() + col] = best;
            m.mean_gain_db[row * m.cols() + col] = best_gain;
        }
    }
    return m;
}

/// Uniform grid over [x_min, x_max] for both the UE and the blocker axis.
inline RegionMap build_region_map(const Scenario& s, double grid_step, double x_min, double x_max)
{
    const auto centers = grid_centers(x_min, x_max, grid_step);
    return build_region_map(s, centers, centers, grid_step);
}

inline RegionMap build_region_map(const Scenario& s)
{
    return build_region_map(s, s.region_grid.step, s.region_grid.x_min, s.region_grid.x_max);
}

struct PredictionInput
{
    Pose ue_pose_at_report;
    std::optional<Pose> blocker_pose_at_report;
    int report_slot = 0;
    int target_slot = 0;
};

struct Prediction
{
    Vec3 ue_position;
    std::optional<Vec3> blocker_position;
};

/// Constant-velocity extrapolation of both vehicles from the report slot.
inline Prediction predict(const PredictionInput& in, double slot_duration)
{
    if (in.target_slot < in.report_slot)
        throw std::invalid_argument("predict: target_slot must not precede report_slot");
    const double dt = (in.target_slot - in.report_slot) * slot_duration;
    Prediction p;
    p.ue_position = advance(in.ue_pose_at_report, dt).position;
    if (in.blocker_pose_at_report)
        p.blocker_position = advance(*in.blocker_pose_at_report, dt).position;
    return p;
}

struct RegionMapRow
{
    std::optional<double> blocker_x;  // nullopt = no blocker
    double ue_x = 0.0;
    std::string candidate;
    double mean_gain_db = 0.0;
};

/// Flat export ordered by (blocker_x, ue_x); the no-blocker row, if included, comes first.
inline std::vector<RegionMapRow> map_to_figure_rows(const RegionMap& m, bool include_sentinel = false)
{
    std::vector<RegionMapRow> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t row = include_sentinel ? 0 : 1; row < m.rows(); ++row)
        for (std::size_t col = 0; col < m.cols(); ++col)
            out.push_back({row == 0 ? std::nullopt : std::optional<double>(m.blocker_x[row - 1]), m.ue_x[col],
                           m.at(row, col).name(), m.gain_at(row, col)});
    return out;
}

}  // namespace rissim
