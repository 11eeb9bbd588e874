// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The rissim Authors
//
// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include "oracles.hpp"
#include "rissim/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace rissim;
namespace fs = std::filesystem;

namespace {

// ------------------------------------------------------------ pinned settings

constexpr double c1_runtime_s = 10.0;
constexpr int c1_realizations = 20;
constexpr int c1_levels = 16;
constexpr double c1_closed_form_rel = 1e-9;

constexpr double c2_runtime_s = 60.0;
constexpr int c2_draws = 1000;
constexpr double c2_lo = 3.6;
constexpr double c2_hi = 4.4;

constexpr int c3_trials = 20;
constexpr double c3_ceiling_rel = 0.01;
constexpr double c3_low_snr_gap = 0.02;

constexpr int c4_trials = 500;
constexpr double c4_power_dbm = 30.0;
constexpr double c4_rel = 0.03;
constexpr double c4_runtime_s = 300.0;

constexpr double c5_ratio_2ris = 1.8;
constexpr double c5_ratio_3ris = 2.2;
constexpr double c5_max_gap = 0.30;

constexpr int c6_trials = 100;
constexpr double c6_target = 1e-2;
constexpr double c6_min_gain_db = 20.0;
constexpr double c6_max_gap_db = 4.0;

constexpr int c8_trials = 10;
constexpr double c8_min_recovery = 0.40;

constexpr int c9_trials = 20;

constexpr int c10_trials = 20;
constexpr double c10_power_dbm = 30.0;

// ------------------------------------------------------------ helpers

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SweepOptions options(int trials, int n_slots, std::uint64_t seed = 1)
{
    SweepOptions o;
    o.trials = trials;
    o.n_slots = n_slots;
    o.seed = seed;
    return o;
}

/// Power at which outage first reaches `target`, interpolating log10(outage)
/// linearly between sweep points; +inf if it never does.
double power_for_outage(const std::vector<MetricsRow>& series, double target)
{
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        if (series[i].outage_prob > target)
            continue;
        if (i == 0)
            return series[0].sweep_value;
        const auto& a = series[i - 1];
        const auto& b = series[i];
        const double la = std::log10(a.outage_prob);
        const double lb = b.outage_prob > 0.0 ? std::log10(b.outage_prob) : la - 6.0;
        const double lt = std::log10(target);
        return a.sweep_value + (b.sweep_value - a.sweep_value) * (la - lt) / (la - lb);
    }
    return std::numeric_limits<double>::infinity();
}

/// Smallest N (log-interpolated) at which `a` reaches `b`; +inf if it never does.
double elements_to_match(const std::vector<MetricsRow>& a, const std::vector<MetricsRow>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double d = a[i].throughput_bps - b[i].throughput_bps;
        if (d < 0.0)
            continue;
        if (i == 0)
            return a[0].sweep_value;
        const double dp = a[i - 1].throughput_bps - b[i - 1].throughput_bps;
        const double l0 = std::log(a[i - 1].sweep_value);
        const double l1 = std::log(a[i].sweep_value);
        return std::exp(l0 + (l1 - l0) * (-dp) / (d - dp));
    }
    return std::numeric_limits<double>::infinity();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ------------------------------------------------------------ criteria

void phase_optimization_oracle()
{
    const auto t0 = Clock::now();
    Engine rng(101);
    const double bound = std::pow(std::cos(std::numbers::pi / c1_levels), 2);
    bool ok = true;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < c1_realizations; ++r)
    {
        const CMatrix d = draw_fading(1, 1, rng);
        const CMatrix in = draw_fading(4, 1, rng);
        const CMatrix out = draw_fading(1, 4, rng);
        const double ao = optimize_beamforming(d, in, out).effective_gain;
        const double bf = oracle::brute_force_gain(d, in, out, c1_levels);
        worst_ratio = std::min(worst_ratio, ao / bf);
        ok = ok && ao >= bf * bound;
    }
    double worst_rel = 0.0;
    for (int r = 0; r < c1_realizations; ++r)
    {
        const CMatrix in = draw_fading(4, 1, rng);
        const CMatrix out = draw_fading(1, 4, rng);
        double sum = 0.0;
        for (int i = 0; i < 4; ++i)
            sum += std::abs(in(i, 0)) * std::abs(out(0, i));
        const double g = optimize_beamforming(CMatrix(), in, out).effective_gain;
        worst_rel = std::max(worst_rel, std::abs(g / (sum * sum) - 1.0));
    }
    const double t = seconds_since(t0);
    ok = ok && worst_rel <= c1_closed_form_rel && t < c1_runtime_s;
    report(1, "phase-optimization oracle", ok,
           fmt("min AO/exhaustive %.6f (floor %.6f), closed-form rel err %.2e, %.2f s", worst_ratio, bound,
               worst_rel, t));
}

void square_law()
{
    const auto t0 = Clock::now();
    Engine rng(202);
    auto mean_gain = [&](int n) {
        const CVector a_bs = steering_vector(4, 0.5, Vec3(1, -0.2, -0.1));
        const CVector a_in = steering_vector(n, 0.5, Vec3(-1, 0.1, 0.1));
        const CVector a_out = steering_vector(n, 0.5, Vec3(0.3, -1, -0.2));
        const CVector a_ue = steering_vector(2, 0.5, Vec3(-0.3, 1, 0.2));
        double acc = 0.0;
        for (int d = 0; d < c2_draws; ++d)
        {
            const CMatrix in = draw_fading(n, 4, 10.0, a_in, a_bs, rng);
            const CMatrix out = draw_fading(2, n, 10.0, a_ue, a_out, rng);
            acc += optimize_beamforming(CMatrix(), in, out).effective_gain;
        }
        return acc / c2_draws;
    };
    bool ok = true;
    std::string detail;
    for (int n : {50, 100, 200})
    {
        const double ratio = mean_gain(2 * n) / mean_gain(n);
        ok = ok && ratio >= c2_lo && ratio <= c2_hi;
        detail += fmt("N=%d ratio %.3f; ", n, ratio);
    }
    const double t = seconds_since(t0);
    ok = ok && t < c2_runtime_s;
    report(2, "N^2 scaling", ok, detail + fmt("%.1f s", t));
}

void impairment_ceiling()
{
    const Preset p = fig2_preset();
    const SweepOptions o = options(c3_trials, p.n_slots);
    const auto ideal = sweep(p.scenario, {SchemeId::LSRPA}, SweepVariable::TxPower, {0.0, 60.0}, o);
    const auto imp = sweep(*p.impaired, {SchemeId::LSRPA}, SweepVariable::TxPower, {0.0, 60.0}, o);
    const double ceiling = std::log2(201.0);
    const double se60 = imp.at(60.0, SchemeId::LSRPA).mean_se_bpshz;
    const double t_ideal = ideal.at(0.0, SchemeId::LSRPA).throughput_bps;
    const double t_imp = imp.at(0.0, SchemeId::LSRPA).throughput_bps;
    const double gap = (t_ideal - t_imp) / t_ideal;
    const bool ok = std::abs(se60 / ceiling - 1.0) <= c3_ceiling_rel && gap < c3_low_snr_gap;
    report(3, "impairment ceiling", ok,
           fmt("SE at 60 dBm %.4f vs %.4f bit/s/Hz, 0 dBm ideal-vs-impaired gap %.3f%%", se60, ceiling, gap * 100));
}

struct Fig2Numbers
{
    double lsrpa = 0, bench = 0, sub6 = 0, addbs = 0;
};

Fig2Numbers fig2_at_30(int ris, const std::vector<SchemeId>& schemes, double* runtime = nullptr)
{
    const Preset p = fig2_preset(ris);
    const auto t0 = Clock::now();
    const auto t = sweep(p.scenario, schemes, SweepVariable::TxPower, {c4_power_dbm}, options(c4_trials, p.n_slots));
    if (runtime)
        *runtime = seconds_since(t0);
    Fig2Numbers n;
    auto get = [&](SchemeId id) {
        return std::find(schemes.begin(), schemes.end(), id) != schemes.end() ? t.at(c4_power_dbm, id).throughput_bps
                                                                               : 0.0;
    };
    n.lsrpa = get(SchemeId::LSRPA);
    n.bench = get(SchemeId::Benchmark);
    n.sub6 = get(SchemeId::NoRisSub6);
    n.addbs = get(SchemeId::AdditionalBs);
    return n;
}

void fig2_criteria()
{
    double runtime = 0.0;
    const Fig2Numbers two = fig2_at_30(
        2, {SchemeId::LSRPA, SchemeId::Benchmark, SchemeId::NoRisSub6, SchemeId::AdditionalBs}, &runtime);
    const double rel = (two.bench - two.lsrpa) / two.bench;
    report(4, "LSRPA vs genie benchmark", std::abs(rel) <= c4_rel && runtime < c4_runtime_s,
           fmt("LSRPA %.2f Mb/s, Benchmark %.2f Mb/s, shortfall %.3f%%, %d trials in %.0f s", two.lsrpa / 1e6,
               two.bench / 1e6, rel * 100, c4_trials, runtime));

    const Fig2Numbers three = fig2_at_30(3, {SchemeId::LSRPA, SchemeId::NoRisSub6, SchemeId::AdditionalBs});
    const double r2 = two.lsrpa / two.sub6;
    const double r3 = three.lsrpa / three.sub6;
    const double gap2 = two.addbs / two.lsrpa - 1.0;
    const double gap3 = three.addbs / three.lsrpa - 1.0;
    const bool a = r2 >= c5_ratio_2ris;
    const bool b = r3 >= c5_ratio_3ris;
    const bool c = gap2 <= c5_max_gap;
    const bool d = gap3 < gap2;
    report(5, "headline ratios", a && b && c && d,
           fmt("(a) %.3fx %s (b) %.3fx %s (c) AdditionalBs +%.1f%% %s (d) gap 3 RIS %.1f%% < 2 RIS %.1f%% %s", r2,
               a ? "ok" : "low", r3, b ? "ok" : "low", gap2 * 100, c ? "ok" : "high", gap3 * 100, gap2 * 100,
               d ? "ok" : "no"));
}

void outage_power_gain()
{
    const Preset p = fig3_preset();
    const auto t = sweep(p.scenario, p.schemes, p.variable, p.values, options(c6_trials, p.n_slots));
    bool monotone = true;
    for (SchemeId id : p.schemes)
    {
        const auto s = t.series(id);
        for (std::size_t i = 1; i < s.size(); ++i)
            monotone = monotone && s[i].outage_prob <= s[i - 1].outage_prob;
    }
    const double lsrpa = power_for_outage(t.series(SchemeId::LSRPA), c6_target);
    const double mmw = power_for_outage(t.series(SchemeId::NoRisMmw), c6_target);
    const double addbs = power_for_outage(t.series(SchemeId::AdditionalBs), c6_target);
    const bool gain = mmw - lsrpa >= c6_min_gain_db;
    const bool close = std::abs(lsrpa - addbs) <= c6_max_gap_db;
    report(6, "outage power gain", gain && close && monotone,
           fmt("P(out=1e-2): LSRPA %.2f dBm, NoRisMmw %.2f dBm (gain %.2f dB), AdditionalBs %.2f dBm (gap %.2f dB), "
               "monotone %s",
               lsrpa, mmw, mmw - lsrpa, addbs, lsrpa - addbs, monotone ? "yes" : "no"));
}

void region_map_correctness()
{
    const Scenario s = default_scenario();
    const RegionMap m = build_region_map(s);
    std::size_t agree = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
        {
            const auto bx = r == 0 ? std::nullopt : std::optional<double>(m.blocker_x[r - 1]);
            agree += m.at(r, c) == oracle::argmax_cell(s, m.ue_x[c], bx);
        }
    const std::size_t cells = m.rows() * m.cols();
    bool sentinel = true;
    for (std::size_t c = 0; c < m.cols(); ++c)
        sentinel = sentinel && m.at(0, c) == PathCandidate::direct();

    const Preset p = fig5_preset();
    const auto& g = p.scenario.region_grid;
    const RegionMap f = build_region_map(p.scenario, grid_centers(g.x_min, g.x_max, g.step), p.blocker_positions, g.step);
    // every stretch boundary is non-decreasing in blocker x, and at least one
    // of them moves between consecutive blocker positions
    bool stretches = true;
    bool shifts = true;
    std::string edges;
    std::vector<std::pair<double, double>> prev;
    for (std::size_t r = 1; r < f.rows(); ++r)
    {
        std::vector<std::pair<double, double>> cur;
        for (int k = 0; k < 2; ++k)
        {
            std::vector<std::size_t> cols;
            for (std::size_t c = 0; c < f.cols(); ++c)
                if (f.at(r, c) == PathCandidate::via_ris(k))
                    cols.push_back(c);
            if (cols.empty() || cols.back() - cols.front() + 1 != cols.size())
            {
                stretches = false;
                cur.emplace_back(0.0, 0.0);
                continue;
            }
            cur.emplace_back(f.ue_x[cols.front()], f.ue_x[cols.back()]);
            edges += fmt("RIS%d@%g:[%g,%g] ", k + 1, f.blocker_x[r - 1], cur.back().first, cur.back().second);
        }
        if (!prev.empty())
        {
            bool moved = false;
            for (std::size_t k = 0; k < cur.size(); ++k)
            {
                shifts = shifts && cur[k].first >= prev[k].first && cur[k].second >= prev[k].second;
                moved = moved || cur[k] != prev[k];
            }
            shifts = shifts && moved;
        }
        prev = cur;
    }
    report(7, "region map correctness", agree == cells && sentinel && stretches && shifts,
           fmt("%zu/%zu cells match oracle, sentinel all Direct %s, stretches %s%s", agree, cells,
               sentinel ? "yes" : "no", edges.c_str(), shifts ? "shift monotonically" : "do not shift monotonically"));
}

void trajectory_compensation()
{
    const Preset p = fig4_preset();
    const RegionMap map = build_region_map(p.scenario);
    Scenario clear = p.scenario;
    clear.blocker.reset();
    ExactSum lsrpa, mmw, ref;
    std::size_t blocked = 0;
    for (int trial = 0; trial < c8_trials; ++trial)
    {
        const StreamKey key = trial_key(1, trial);
        const TrialPlan tp = plan_trial(p.scenario, {SchemeId::LSRPA, SchemeId::NoRisMmw}, p.n_slots, key, &map);
        const TrialPlan tc = plan_trial(clear, {SchemeId::NoRisMmw}, p.n_slots, key, nullptr);
        const auto l = evaluate_trial(p.scenario, tp, 0, p.scenario.tx_power_dbm);
        const auto n = evaluate_trial(p.scenario, tp, 1, p.scenario.tx_power_dbm);
        const auto c = evaluate_trial(clear, tc, 0, clear.tx_power_dbm);
        for (std::size_t t = 0; t < l.size(); ++t)
            if (tp.blocked_direct[t])
            {
                ++blocked;
                lsrpa.add(l[t].delivered);
                mmw.add(n[t].delivered);
                ref.add(c[t].delivered);
            }
    }
    const double k = static_cast<double>(blocked);
    const double lost = (ref.value() - mmw.value()) / k;
    const double recovered = (lsrpa.value() - mmw.value()) / k;
    const double frac = recovered / lost;
    report(8, "trajectory compensation", frac >= c8_min_recovery,
           fmt("blocked-stretch means: unblocked direct %.1f, NoRisMmw %.1f, LSRPA %.1f Mb/s; recovered %.1f%% of "
               "the loss over %zu slots",
               ref.value() / k / 1e6, mmw.value() / k / 1e6, lsrpa.value() / k / 1e6, frac * 100, blocked));
}

void elements_sweep()
{
    const Preset p = fig6_preset();
    const std::vector<SchemeId> schemes{SchemeId::LSRPA, SchemeId::AdditionalBs};
    const auto ideal = sweep(p.scenario, schemes, p.variable, p.values, options(c9_trials, p.n_slots));
    const auto imp = sweep(*p.impaired, schemes, p.variable, p.values, options(c9_trials, p.n_slots));
    const auto l = ideal.series(SchemeId::LSRPA);
    bool nondecreasing = true;
    for (std::size_t i = 1; i < l.size(); ++i)
        nondecreasing = nondecreasing && l[i].throughput_bps >= l[i - 1].throughput_bps;
    const double n_ideal = elements_to_match(l, ideal.series(SchemeId::AdditionalBs));
    const double n_imp = elements_to_match(imp.series(SchemeId::LSRPA), imp.series(SchemeId::AdditionalBs));
    std::string curve;
    for (const auto& r : l)
        curve += fmt("%g:%.1f ", r.sweep_value, r.throughput_bps / 1e6);
    report(9, "elements sweep", nondecreasing && n_imp > n_ideal && std::isfinite(n_ideal),
           fmt("LSRPA Mb/s by N {%s} non-decreasing %s; N to reach AdditionalBs: ideal %.1f, impaired %.1f",
               curve.c_str(), nondecreasing ? "yes" : "no", n_ideal, n_imp));
}

void dominance_and_determinism()
{
    std::size_t slots = 0;
    std::size_t ok = 0;
    const Preset p = fig2_preset();
    for (const Scenario* s : {&p.scenario, &*p.impaired})
    {
        const RegionMap map = build_region_map(*s);
        const std::vector<SchemeId> schemes{SchemeId::Benchmark, SchemeId::LSRPA, SchemeId::RandomPhase};
        for (int trial = 0; trial < c10_trials; ++trial)
        {
            const TrialPlan tp = plan_trial(*s, schemes, p.n_slots, trial_key(5, trial), &map);
            const auto b = evaluate_trial(*s, tp, 0, c10_power_dbm);
            const auto l = evaluate_trial(*s, tp, 1, c10_power_dbm);
            const auto r = evaluate_trial(*s, tp, 2, c10_power_dbm);
            for (std::size_t t = 0; t < b.size(); ++t)
            {
                ++slots;
                ok += b[t].rate >= l[t].rate && l[t].rate >= r[t].rate;
            }
        }
    }

    const fs::path root = fs::temp_directory_path() / "rissim-acceptance";
    fs::remove_all(root);
    bool identical = true;
    std::size_t files = 0;
    for (const std::string name : {"fig2", "fig4", "fig5"})
    {
        std::string first_run;
        for (unsigned threads : {1u, 2u})
        {
            RunOptions o;
            o.seed = 9;
            o.trials = 2;
            o.n_slots = 30;
            o.threads = threads;
            o.out_dir = root / (name + std::to_string(threads));
            const RunSummary sum = run_preset(make_preset(name), o);
            std::string all;
            for (const auto& f : sum.files)
                if (f.extension() == ".csv")
                {
                    all += slurp(f);
                    files += threads == 1;
                }
            if (threads == 1)
                first_run = all;
            else
                identical = identical && all == first_run && !all.empty();
        }
    }
    fs::remove_all(root);
    report(10, "pathwise dominance and determinism", ok == slots && identical,
           fmt("Benchmark >= LSRPA >= RandomPhase on %zu/%zu slots; %zu CSVs byte-identical across reruns %s", ok,
               slots, files, identical ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv)
{
    // optional criterion filter: rissim_acceptance 4 5
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));
    auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    const std::vector<std::pair<std::vector<int>, std::function<void()>>> steps{
        {{1}, phase_optimization_oracle}, {{2}, square_law},        {{3}, impairment_ceiling},
        {{4, 5}, fig2_criteria},          {{6}, outage_power_gain}, {{7}, region_map_correctness},
        {{8}, trajectory_compensation},   {{9}, elements_sweep},    {{10}, dominance_and_determinism},
    };
    const auto t0 = Clock::now();
    for (const auto& [ids, run] : steps)
    {
        if (std::none_of(ids.begin(), ids.end(), want))
            continue;
        try
        {
            run();
        }
        catch (const std::exception& e)
        {
            for (int id : ids)
                report(id, "error", false, e.what());
        }
    }
    std::printf("%d failing criteria, %.0f s total\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
