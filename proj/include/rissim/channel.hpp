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

#include "rissim/diagnostics.hpp"
#include "rissim/path.hpp"
#include "rissim/rng.hpp"
#include "rissim/scenario.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rissim {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double speed_of_light = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Free-space loss at the 1 m reference plus a log-distance slope.
/// Distances below 1 m are clamped to 1 m and counted in diagnostics().
inline double path_loss_db(double distance, double freq, double exponent)
{
    if (!(freq > 0.0))
        throw std::invalid_argument("path_loss_db: freq must be positive");
    if (distance < 1.0)
    {
        diagnostics().distance_clamps.fetch_add(1, std::memory_order_relaxed);
        distance = 1.0;
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * freq / speed_of_light) + 10.0 * exponent * std::log10(distance);
}

/// Thermal noise over a band: PSD + 10 log10(B) + NF.
inline double noise_power_dbm(double noise_psd_dbm_hz, double bandwidth, double noise_figure_db)
{
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("noise_power_dbm: bandwidth must be positive");
    return noise_psd_dbm_hz + 10.0 * std::log10(bandwidth) + noise_figure_db;
}

inline double noise_power_dbm(const Scenario& s)
{
    return noise_power_dbm(s.noise_psd_dbm_hz, s.bandwidth, s.noise_figure_db);
}

/// Uniform linear array along the road axis; `toward` points from the array to
/// the far end of the link.
inline CVector steering_vector(int n, double spacing_wavelengths, const Vec3& toward)
{
    const double norm = toward.norm();
    const double cos_angle = norm > 0.0 ? toward.x() / norm : 1.0;
    CVector a(n);
    const double step = 2.0 * std::numbers::pi * spacing_wavelengths * cos_angle;
    for (int k = 0; k < n; ++k)
        a(k) = std::polar(1.0, step * k);
    return a;
}

/// Rician fading matrix: sqrt(K/(K+1)) a_rx a_tx^H + sqrt(1/(K+1)) W, W i.i.d. CN(0,1).
/// k_factor_db = +inf gives the pure steering outer product; -inf gives Rayleigh.
inline CMatrix draw_fading(int rows, int cols, double k_factor_db, const CVector& a_rx, const CVector& a_tx, Engine& rng)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("draw_fading: rows and cols must be >= 1");
    if (a_rx.size() != rows || a_tx.size() != cols)
        throw std::invalid_argument("draw_fading: steering vector length mismatch");
    CMatrix h(rows, cols);
    if (k_factor_db == std::numeric_limits<double>::infinity())
    {
        h = a_rx * a_tx.adjoint();
        return h;
    }
    const double k = std::isinf(k_factor_db) ? 0.0 : db_to_linear(k_factor_db);
    const double los = std::sqrt(k / (k + 1.0));
    const double nlos = std::sqrt(1.0 / (k + 1.0));
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(r, c) = los * a_rx(r) * std::conj(a_tx(c)) + nlos * cd(re, im);
        }
    return h;
}

/// Rayleigh convenience overload (no LoS component).
inline CMatrix draw_fading(int rows, int cols, Engine& rng)
{
    return draw_fading(rows, cols, -std::numeric_limits<double>::infinity(), CVector::Ones(rows), CVector::Ones(cols), rng);
}

struct LinkChannel
{
    CMatrix matrix;  // rows = receive ports, cols = transmit ports
    double path_gain_db = 0.0;
    bool blocked = false;

    bool present() const { return matrix.size() > 0; }
    double amplitude() const { return std::sqrt(db_to_linear(path_gain_db)); }
};

/// Which links realize_channels should draw. Every link lives on its own
/// random substream, so skipping one never shifts another's numbers.
struct LinkMask
{
    bool direct = true;
    bool ris = true;
    bool repeaters = true;
    bool extra_bs = true;
    bool sub6 = true;

    static LinkMask none() { return {false, false, false, false, false}; }
};

struct ChannelRealization
{
    LinkChannel direct;                 // BS -> UE
    std::vector<LinkChannel> inbound;   // BS -> RIS k
    std::vector<LinkChannel> outbound;  // RIS k -> UE
    std::vector<std::pair<LinkChannel, LinkChannel>> repeater_hops;
    std::optional<LinkChannel> extra_bs_direct;
    std::optional<LinkChannel> sub6_direct;
    LinkBlockage blockage;
};

namespace detail {

inline LinkChannel realize_link(const Vec3& tx, int n_tx, double tx_spacing, const Vec3& rx, int n_rx, double rx_spacing,
                                double freq, double exponent, double k_db, double extra_gain_db, bool blocked,
                                double vpl_db, const StreamKey& key)
{
    LinkChannel link;
    link.blocked = blocked;
    link.path_gain_db = -path_loss_db(distance(tx, rx), freq, exponent) + extra_gain_db - (blocked ? vpl_db : 0.0);
    const CVector a_tx = steering_vector(n_tx, tx_spacing, rx - tx);
    const CVector a_rx = steering_vector(n_rx, rx_spacing, tx - rx);
    Engine rng = key.engine();
    link.matrix = draw_fading(n_rx, n_tx, k_db, a_rx, a_tx, rng) * link.amplitude();
    return link;
}

}  // namespace detail

/// One slot's channel matrices. A link flagged blocked by los_state carries an
/// extra `vpl_db` attenuation; nothing else depends on blockage.
inline ChannelRealization realize_channels(const Scenario& s, const Pose& ue_pose,
                                           const std::optional<BlockerBox>& blocker, const StreamKey& slot_key,
                                           const LinkMask& mask = {})
{
    ChannelRealization out;
    const Vec3& ue = ue_pose.position;
    out.blockage = los_state(s, ue, blocker);
    const auto& c = s.channel;
    const double sp = c.antenna_spacing;
    const double f = s.carrier_freq;

    if (mask.direct)
        out.direct = detail::realize_link(s.bs_position, s.bs_antennas, sp, ue, s.ue_antennas, sp, f, c.exponent_direct,
                                          c.k_direct_db, 0.0, out.blockage.direct, s.vpl_db,
                                          slot_key.derive(streams::direct));
    if (mask.ris)
    {
        out.inbound.resize(s.ris_list.size());
        out.outbound.resize(s.ris_list.size());
        for (std::size_t i = 0; i < s.ris_list.size(); ++i)
        {
            const RisSpec& r = s.ris_list[i];
            out.inbound[i] = detail::realize_link(s.bs_position, s.bs_antennas, sp, r.position, r.n_elements,
                                                  r.element_spacing, f, c.exponent_bs_ris, c.k_ris_db,
                                                  r.element_gain_db, out.blockage.bs_ris[i], s.vpl_db,
                                                  slot_key.derive(streams::ris_inbound, i));
            out.outbound[i] = detail::realize_link(r.position, r.n_elements, r.element_spacing, ue, s.ue_antennas, sp,
                                                   f, c.exponent_ris_ue, c.k_ris_db, r.element_gain_db,
                                                   out.blockage.ris_ue[i], s.vpl_db,
                                                   slot_key.derive(streams::ris_outbound, i));
        }
    }
    if (mask.repeaters)
    {
        out.repeater_hops.resize(s.repeater_list.size());
        for (std::size_t i = 0; i < s.repeater_list.size(); ++i)
        {
            const RepeaterSpec& r = s.repeater_list[i];
            out.repeater_hops[i].first = detail::realize_link(
                s.bs_position, s.bs_antennas, sp, r.position, r.antennas, sp, f, c.exponent_repeater, c.k_repeater_db,
                0.0, out.blockage.repeater_hop1[i], s.vpl_db, slot_key.derive(streams::repeater_hop1, i));
            out.repeater_hops[i].second = detail::realize_link(
                r.position, r.antennas, sp, ue, s.ue_antennas, sp, f, c.exponent_repeater, c.k_repeater_db, 0.0,
                out.blockage.repeater_hop2[i], s.vpl_db, slot_key.derive(streams::repeater_hop2, i));
        }
    }
    if (mask.extra_bs && s.extra_bs)
        out.extra_bs_direct = detail::realize_link(s.extra_bs->position, s.extra_bs->antennas, sp, ue, s.ue_antennas, sp,
                                                   f, c.exponent_extra_bs, c.k_direct_db, 0.0, out.blockage.extra_bs,
                                                   s.vpl_db, slot_key.derive(streams::extra_bs));
    if (mask.sub6 && s.sub6)
    {
        const Sub6Spec& b = *s.sub6;
        out.sub6_direct = detail::realize_link(s.bs_position, b.bs_antennas, sp, ue, s.ue_antennas, sp, b.carrier_freq,
                                               b.pathloss_exponent, b.k_factor_db, 0.0, out.blockage.direct, b.vpl_db,
                                               slot_key.derive(streams::sub6));
    }
    return out;
}

/// Deterministic long-term gain of a candidate path, in dB (array gains excluded).
/// RIS paths add the 20 log10(N) co-phasing gain and each hop's element gain.
inline double large_scale_gain_db(const Scenario& s, const PathCandidate& path, const Vec3& ue,
                                  const std::optional<BlockerBox>& blocker)
{
    const auto& c = s.channel;
    const double f = s.carrier_freq;
    auto vpl_if = [&](const Vec3& a, const Vec3& b) { return blocker && is_blocked(a, b, *blocker) ? s.vpl_db : 0.0; };
    switch (path.kind)
    {
    case PathCandidate::Kind::Direct:
        return -path_loss_db(distance(s.bs_position, ue), f, c.exponent_direct) - vpl_if(s.bs_position, ue);
    case PathCandidate::Kind::ViaRis: {
        if (path.index < 0 || path.index >= static_cast<int>(s.ris_list.size()))
            throw std::out_of_range("large_scale_gain_db: RIS index out of range");
        const RisSpec& r = s.ris_list[path.index];
        const double pl_in = path_loss_db(distance(s.bs_position, r.position), f, c.exponent_bs_ris);
        const double pl_out = path_loss_db(distance(r.position, ue), f, c.exponent_ris_ue);
        return -(pl_in + pl_out) + 2.0 * r.element_gain_db + 20.0 * std::log10(static_cast<double>(r.n_elements)) -
               vpl_if(s.bs_position, r.position) - vpl_if(r.position, ue);
    }
    case PathCandidate::Kind::ViaExtraBs: {
        if (!s.extra_bs)
            throw std::out_of_range("large_scale_gain_db: scenario has no extra BS");
        return -path_loss_db(distance(s.extra_bs->position, ue), f, c.exponent_extra_bs) -
               vpl_if(s.extra_bs->position, ue);
    }
    case PathCandidate::Kind::ViaRepeater:
        break;
    }
    throw std::invalid_argument("large_scale_gain_db: an active two-hop relay has no single large-scale gain");
}

}  // namespace rissim
