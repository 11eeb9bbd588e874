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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace rissim {

/// RIS reflection state: element i reflects with coefficient exp(j phases[i]).
struct PhaseConfig
{
    std::vector<double> phases;

    static PhaseConfig zeros(int n) { return PhaseConfig{std::vector<double>(static_cast<std::size_t>(n), 0.0)}; }

    int size() const { return static_cast<int>(phases.size()); }

    CVector coefficients() const
    {
        CVector c(size());
        for (int i = 0; i < size(); ++i)
            c(i) = std::polar(1.0, phases[static_cast<std::size_t>(i)]);
        return c;
    }
};

/// Dominant eigenmode of a MIMO matrix: unit-norm precoder (transmit side),
/// unit-norm combiner (receive side) and the squared top singular value.
struct Eigenmode
{
    double gain = 0.0;
    CVector precoder;
    CVector combiner;
};

inline Eigenmode dominant_eigenmode(const CMatrix& h)
{
    if (h.size() == 0)
        throw std::invalid_argument("dominant_eigenmode: empty matrix");
    Eigenmode m;
    auto unit_or_first = [](CVector v) {
        const double n = v.norm();
        if (n > 0.0)
            return CVector(v / n);
        CVector e = CVector::Zero(v.size());
        e(0) = 1.0;
        return e;
    };
    // Work on the smaller Gram matrix.
    if (h.rows() <= h.cols())
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h * h.adjoint());
        m.combiner = unit_or_first(es.eigenvectors().col(h.rows() - 1));
        const CVector hw = h.adjoint() * m.combiner;
        m.gain = hw.squaredNorm();
        m.precoder = unit_or_first(hw);
    }
    else
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h.adjoint() * h);
        m.precoder = unit_or_first(es.eigenvectors().col(h.cols() - 1));
        const CVector hv = h * m.precoder;
        m.gain = hv.squaredNorm();
        m.combiner = unit_or_first(hv);
    }
    return m;
}

namespace detail {

inline void check_cascade_dims(const CMatrix& direct, const CMatrix& inbound, int n_phases, const CMatrix& outbound)
{
    if (inbound.rows() != n_phases || outbound.cols() != n_phases)
        throw std::invalid_argument("effective_channel: phase vector length must equal the RIS element count");
    if (direct.size() > 0 && (direct.rows() != outbound.rows() || direct.cols() != inbound.cols()))
        throw std::invalid_argument("effective_channel: direct matrix must be (UE antennas x BS antennas)");
}

inline CMatrix cascade(const CMatrix& direct, const CMatrix& inbound, const CVector& coeffs, const CMatrix& outbound)
{
    CMatrix h = outbound * coeffs.asDiagonal() * inbound;
    if (direct.size() > 0)
        h += direct;
    return h;
}

inline void require_finite(const CMatrix& m, const char* what)
{
    if (m.size() > 0 && !m.allFinite())
        throw std::domain_error(std::string("optimize_beamforming: non-finite entries in ") + what);
}

}  // namespace detail

/// H_eff = H_direct + H_out diag(exp(j theta)) H_in. An empty `direct` counts as zero.
inline CMatrix effective_channel(const CMatrix& direct, const CMatrix& inbound, const PhaseConfig& phases,
                                 const CMatrix& outbound)
{
    detail::check_cascade_dims(direct, inbound, phases.size(), outbound);
    return detail::cascade(direct, inbound, phases.coefficients(), outbound);
}

/// |u^H H_eff w|^2 for fixed beamformers.
inline double beamformed_gain(const CMatrix& direct, const CMatrix& inbound, const PhaseConfig& phases,
                              const CMatrix& outbound, const CVector& precoder, const CVector& combiner)
{
    const CMatrix h = effective_channel(direct, inbound, phases, outbound);
    return std::norm(combiner.dot(h * precoder));
}

struct BeamformedLink
{
    double effective_gain = 0.0;
    CVector precoder;
    CVector combiner;
    std::optional<PhaseConfig> phase_config;
    int iterations = 0;
    std::vector<double> gain_trace;  // effective gain after each beamformer update
};

struct OptimizerOptions
{
    int max_iters = 50;
    double tol = 1e-6;  // relative improvement of the effective gain
};

/// Point-to-point link: beamform on the dominant eigenmode.
inline BeamformedLink optimize_beamforming(const CMatrix& direct)
{
    detail::require_finite(direct, "direct");
    Eigenmode m = dominant_eigenmode(direct);
    BeamformedLink out;
    out.effective_gain = m.gain;
    out.precoder = std::move(m.precoder);
    out.combiner = std::move(m.combiner);
    out.gain_trace = {out.effective_gain};
    return out;
}

/// Alternating maximization of the RIS-assisted single-stream gain.
///
/// Starting from all-zero phases, alternate
///   (a) precoder/combiner <- dominant eigenmode of H_eff(theta);
///   (b) theta_i <- arg(c0) - arg(a_i), where c0 = u^H H_d w and
///       a_i = (u^H H_out)_i (H_in w)_i, which puts every element's
///       contribution in phase with the direct term.
/// Each half-step is optimal given the other, so the gain never decreases.
/// Stops when the relative gain improvement drops below `tol`.
inline BeamformedLink optimize_beamforming(const CMatrix& direct, const CMatrix& inbound, const CMatrix& outbound,
                                           const OptimizerOptions& opt = {})
{
    const int n = static_cast<int>(inbound.rows());
    detail::check_cascade_dims(direct, inbound, n, outbound);
    detail::require_finite(direct, "direct");
    detail::require_finite(inbound, "inbound");
    detail::require_finite(outbound, "outbound");

    PhaseConfig phases = PhaseConfig::zeros(n);
    Eigenmode mode = dominant_eigenmode(detail::cascade(direct, inbound, phases.coefficients(), outbound));

    BeamformedLink best;
    best.gain_trace.push_back(mode.gain);
    int iter = 0;
    for (; iter < opt.max_iters; ++iter)
    {
        const CVector t = inbound * mode.precoder;
        const CVector v = outbound.adjoint() * mode.combiner;
        const cd c0 = direct.size() > 0 ? mode.combiner.dot(direct * mode.precoder) : cd(0.0, 0.0);
        const double ref = std::abs(c0) > 0.0 ? std::arg(c0) : 0.0;
        PhaseConfig next{std::vector<double>(static_cast<std::size_t>(n))};
        for (int i = 0; i < n; ++i)
            next.phases[static_cast<std::size_t>(i)] = ref - std::arg(std::conj(v(i)) * t(i));

        Eigenmode next_mode = dominant_eigenmode(detail::cascade(direct, inbound, next.coefficients(), outbound));
        if (!(next_mode.gain >= mode.gain))
            break;  // rounding-level regression; keep the current point
        const double rel = mode.gain > 0.0 ? (next_mode.gain - mode.gain) / mode.gain : 1.0;
        phases = std::move(next);
        mode = std::move(next_mode);
        best.gain_trace.push_back(mode.gain);
        if (rel < opt.tol)
        {
            ++iter;
            break;
        }
    }
    best.effective_gain = mode.gain;
    best.precoder = std::move(mode.precoder);
    best.combiner = std::move(mode.combiner);
    best.phase_config = std::move(phases);
    best.iterations = iter;
    return best;
}

/// Adds i.i.d. Uniform[-bound, bound] errors to every phase. bound = 0 is an
/// exact no-op and consumes no random numbers.
inline PhaseConfig apply_phase_noise(const PhaseConfig& phases, double bound, Engine& rng)
{
    if (bound < 0.0 || bound > std::numbers::pi)
        throw std::invalid_argument("apply_phase_noise: bound must lie in [0, pi]");
    if (bound == 0.0)
        return phases;
    std::uniform_real_distribution<double> u(-bound, bound);
    PhaseConfig out = phases;
    for (double& p : out.phases)
        p += u(rng);
    return out;
}

/// I.i.d. Uniform[0, 2 pi) phases.
inline PhaseConfig random_phases(int n, Engine& rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    PhaseConfig out{std::vector<double>(static_cast<std::size_t>(n))};
    for (double& p : out.phases)
        p = u(rng);
    return out;
}

/// Signal-to-noise(-and-distortion) ratio. With impairments enabled the
/// distortion noise scales with the received power, so the ratio saturates at
/// 1 / (kappa_t^2 + kappa_r^2).
inline double sinr(double effective_gain, double tx_power_dbm, double noise_dbm, const ImpairmentSpec& imp)
{
    if (!(effective_gain >= 0.0))
        throw std::invalid_argument("sinr: effective_gain must be non-negative");
    const double snr = effective_gain * db_to_linear(tx_power_dbm - noise_dbm);
    if (!imp.enabled)
        return snr;
    if (std::isinf(snr))
        return 1.0 / imp.total();
    return snr / (snr * imp.total() + 1.0);
}

struct Rate
{
    double spectral_efficiency = 0.0;  // bit/s/Hz
    double bps = 0.0;
};

inline Rate shannon_rate(double sinr_linear, double bandwidth)
{
    Rate r;
    r.spectral_efficiency = std::log2(1.0 + sinr_linear);
    r.bps = bandwidth * r.spectral_efficiency;
    return r;
}

inline Rate rate_bps(const BeamformedLink& link, const Scenario& s, const ImpairmentSpec& imp)
{
    return shannon_rate(sinr(link.effective_gain, s.tx_power_dbm, noise_power_dbm(s), imp), s.bandwidth);
}

/// End-to-end SNR of a two-hop amplify-and-forward relay.
inline double af_snr(double snr1, double snr2)
{
    if (std::isinf(snr1))
        return snr2;
    if (std::isinf(snr2))
        return snr1;
    return snr1 * snr2 / (snr1 + snr2 + 1.0);
}

/// Hop 1 at the BS power, hop 2 at the repeater's own power; both single-stream.
inline Rate repeater_rate(const BeamformedLink& hop1, const BeamformedLink& hop2, double repeater_power_dbm,
                          const Scenario& s, const ImpairmentSpec& imp)
{
    const double noise = noise_power_dbm(s);
    const ImpairmentSpec ideal{};
    const double g1 = sinr(hop1.effective_gain, s.tx_power_dbm, noise, ideal);
    const double g2 = sinr(hop2.effective_gain, repeater_power_dbm, noise, ideal);
    double e2e = af_snr(g1, g2);
    if (imp.enabled)
        e2e = e2e / (e2e * imp.total() + 1.0);
    return shannon_rate(e2e, s.bandwidth);
}

}  // namespace rissim
