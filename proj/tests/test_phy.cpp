// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The rissim Authors

#include "oracles.hpp"
#include "rissim/phy.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rissim;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST(Eigenmode, MatchesTopSingularValue)
{
    Engine rng(3);
    for (auto [r, c] : {std::pair{4, 16}, std::pair{16, 4}, std::pair{1, 1}, std::pair{3, 3}})
    {
        const CMatrix h = draw_fading(r, c, rng);
        Eigen::JacobiSVD<CMatrix> svd(h);
        const double s = svd.singularValues()(0);
        const Eigenmode m = dominant_eigenmode(h);
        EXPECT_NEAR(m.gain, s * s, 1e-9 * s * s);
        EXPECT_NEAR(m.precoder.norm(), 1.0, 1e-12);
        EXPECT_NEAR(m.combiner.norm(), 1.0, 1e-12);
        EXPECT_NEAR(std::norm(m.combiner.dot(h * m.precoder)), m.gain, 1e-9 * m.gain);
    }
}

TEST(Optimizer, SingleAntennaBeatsQuantizedExhaustiveSearch)
{
    Engine rng(17);
    for (int trial = 0; trial < 5; ++trial)
    {
        const CMatrix d = draw_fading(1, 1, rng);
        const CMatrix in = draw_fading(4, 1, rng);
        const CMatrix out = draw_fading(1, 4, rng);
        const double ao = optimize_beamforming(d, in, out).effective_gain;
        const double bf = oracle::brute_force_gain(d, in, out, 16);
        EXPECT_GE(ao, bf * (1.0 - 1e-9));
        // worst-case per-element phase error pi/16 bounds the quantization loss
        EXPECT_GE(bf, ao * std::pow(std::cos(pi / 16.0), 2) - 1e-12);
    }
}

TEST(Optimizer, NoDirectPathMatchesCoPhasedClosedForm)
{
    Engine rng(23);
    const CMatrix in = draw_fading(8, 1, rng);
    const CMatrix out = draw_fading(1, 8, rng);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += std::abs(in(i, 0)) * std::abs(out(0, i));
    const double g = optimize_beamforming(CMatrix(), in, out).effective_gain;
    EXPECT_NEAR(g / (sum * sum), 1.0, 1e-9);
}

TEST(Optimizer, GainTraceIsMonotone)
{
    Engine rng(29);
    const CMatrix d = draw_fading(4, 16, rng) * 0.1;
    const CMatrix in = draw_fading(64, 16, rng);
    const CMatrix out = draw_fading(4, 64, rng);
    const BeamformedLink l = optimize_beamforming(d, in, out);
    ASSERT_GE(l.gain_trace.size(), 2u);
    for (std::size_t i = 1; i < l.gain_trace.size(); ++i)
        EXPECT_GE(l.gain_trace[i], l.gain_trace[i - 1]);
    EXPECT_LE(l.iterations, 50);
    EXPECT_DOUBLE_EQ(l.effective_gain, l.gain_trace.back());
    ASSERT_TRUE(l.phase_config);
    EXPECT_NEAR(beamformed_gain(d, in, *l.phase_config, out, l.precoder, l.combiner), l.effective_gain,
                1e-9 * l.effective_gain);
}

TEST(Optimizer, RejectsMismatchedAndNonFiniteInputs)
{
    Engine rng(1);
    const CMatrix in = draw_fading(8, 4, rng);
    const CMatrix out = draw_fading(2, 7, rng);
    EXPECT_THROW(optimize_beamforming(CMatrix(), in, out), std::invalid_argument);
    CMatrix bad = draw_fading(2, 8, rng);
    bad(0, 0) = cd(std::nan(""), 0.0);
    EXPECT_THROW(optimize_beamforming(CMatrix(), in, bad), std::domain_error);
    EXPECT_THROW(effective_channel(CMatrix(), in, PhaseConfig::zeros(3), out), std::invalid_argument);
}

TEST(Optimizer, GainGrowsWithSquareOfElements)
{
    Engine rng(31);
    auto mean_gain = [&](int n) {
        const CVector a_bs = steering_vector(4, 0.5, Vec3(1, -0.2, -0.1));
        const CVector a_ris_in = steering_vector(n, 0.5, Vec3(-1, 0.1, 0.1));
        const CVector a_ris_out = steering_vector(n, 0.5, Vec3(0.3, -1, -0.2));
        const CVector a_ue = steering_vector(2, 0.5, Vec3(-0.3, 1, 0.2));
        double acc = 0.0;
        for (int d = 0; d < 100; ++d)
        {
            const CMatrix in = draw_fading(n, 4, 10.0, a_ris_in, a_bs, rng);
            const CMatrix out = draw_fading(2, n, 10.0, a_ue, a_ris_out, rng);
            acc += optimize_beamforming(CMatrix(), in, out).effective_gain;
        }
        return acc / 100.0;
    };
    const double ratio = mean_gain(64) / mean_gain(32);
    EXPECT_GT(ratio, 3.6);
    EXPECT_LT(ratio, 4.4);
}

TEST(PhaseNoise, ZeroBoundIsExactNoOp)
{
    Engine rng(2);
    const Engine before = rng;
    const PhaseConfig p{{0.1, -1.0, 2.5}};
    EXPECT_EQ(apply_phase_noise(p, 0.0, rng).phases, p.phases);
    EXPECT_EQ(rng, before);
    EXPECT_THROW(apply_phase_noise(p, -0.1, rng), std::invalid_argument);
    EXPECT_THROW(apply_phase_noise(p, 3.5, rng), std::invalid_argument);
}

TEST(PhaseNoise, UniformErrorMoments)
{
    Engine rng(8);
    const double delta = pi / 8.0;
    const PhaseConfig zero = PhaseConfig::zeros(100000);
    const PhaseConfig noisy = apply_phase_noise(zero, delta, rng);
    double mean = 0.0;
    double sq = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    for (double e : noisy.phases)
    {
        mean += e;
        sq += e * e;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    mean /= 100000.0;
    EXPECT_NEAR(mean, 0.0, 0.003);
    EXPECT_NEAR(sq / 100000.0, delta * delta / 3.0, 0.002);
    EXPECT_GE(lo, -delta);
    EXPECT_LE(hi, delta);
}

TEST(PhaseNoise, CoherentLossFollowsSincSquared)
{
    // With unit-modulus co-phased terms, E|sum e^{j e_i}|^2 / N^2
    //   = s^2 + (1 - s^2) / N,  s = sin(delta) / delta.
    Engine rng(12);
    const int n = 200;
    const CMatrix in = CMatrix::Ones(n, 1);
    const CMatrix out = CMatrix::Ones(1, n);
    const BeamformedLink l = optimize_beamforming(CMatrix(), in, out);
    for (double delta : {pi / 8.0, pi / 4.0, pi / 2.0, pi})
    {
        double acc = 0.0;
        const int draws = 2000;
        for (int d = 0; d < draws; ++d)
        {
            const PhaseConfig p = apply_phase_noise(*l.phase_config, delta, rng);
            acc += beamformed_gain(CMatrix(), in, p, out, l.precoder, l.combiner);
        }
        const double s = std::sin(delta) / delta;
        const double expect = s * s + (1.0 - s * s) / n;
        EXPECT_NEAR(acc / draws / (double(n) * n), expect, 0.03 * expect + 1e-4) << "delta " << delta;
    }
}

TEST(Sinr, ImpairmentCeiling)
{
    ImpairmentSpec imp;
    imp.enabled = true;
    EXPECT_NEAR(sinr(1.0, 300.0, 0.0, imp), 200.0, 1e-6);
    EXPECT_DOUBLE_EQ(sinr(std::numeric_limits<double>::infinity(), 0.0, 0.0, imp), 200.0);
    EXPECT_NEAR(shannon_rate(sinr(1.0, 300.0, 0.0, imp), 1.0).spectral_efficiency, 7.651052, 1e-6);
    EXPECT_NEAR(sinr(1.0, 0.0, 0.0, imp), 1.0 / 1.005, 1e-12);
    EXPECT_DOUBLE_EQ(sinr(1.0, 10.0, 0.0, ImpairmentSpec{}), 10.0);
    EXPECT_THROW(sinr(-1.0, 0.0, 0.0, imp), std::invalid_argument);
}

TEST(Relay, AmplifyAndForwardEndToEnd)
{
    EXPECT_NEAR(af_snr(10.0, 10.0), 100.0 / 21.0, 1e-12);
    EXPECT_NEAR(af_snr(100.0, 1.0), 100.0 / 102.0, 1e-12);
    EXPECT_DOUBLE_EQ(af_snr(std::numeric_limits<double>::infinity(), 7.0), 7.0);
    EXPECT_LT(af_snr(5.0, 9.0), 5.0);
}

TEST(Rate, Shannon)
{
    const Rate r = shannon_rate(3.0, 10e6);
    EXPECT_DOUBLE_EQ(r.spectral_efficiency, 2.0);
    EXPECT_DOUBLE_EQ(r.bps, 20e6);
}
