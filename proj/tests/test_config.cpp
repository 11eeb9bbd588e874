// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The rissim Authors

#include "rissim/config.hpp"
#include "rissim/csv.hpp"
#include "rissim/presets.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rissim;

namespace {

constexpr const char* minimal = R"(# two-lane road, one RIS
carrier_freq = 28e9
bandwidth = 10e6
bs_position = 0, 20, 10
tx_power_dbm = 30

[ris]
position = 120, 15, 5
n_elements = 64
)";

std::vector<std::string> header_fields(const char* header)
{
    std::istringstream in(header);
    return read_csv(in).at(0);
}

}  // namespace

TEST(Config, MinimalFileParses)
{
    const Scenario s = parse_config(minimal);
    EXPECT_EQ(s.carrier_freq, 28e9);
    EXPECT_EQ(s.tx_power_dbm, 30.0);
    ASSERT_EQ(s.ris_list.size(), 1u);
    EXPECT_EQ(s.ris_list[0].n_elements, 64);
    EXPECT_EQ(s.ris_list[0].position, Vec3(120, 15, 5));
    EXPECT_FALSE(s.blocker.has_value());
}

TEST(Config, UnknownKeyReportsLine)
{
    const std::string text = "carrier_freq = 28e9\nbandwith = 10e6\n";
    try
    {
        parse_config(text);
        FAIL();
    }
    catch (const ParseError& e)
    {
        EXPECT_EQ(e.line(), 2);
        EXPECT_STREQ(e.what(), "line 2: unknown key 'bandwith' in top level");
    }
    try
    {
        parse_config("[ris]\nposition = 1, 2, 3\nelements = 4\n");
        FAIL();
    }
    catch (const ParseError& e)
    {
        EXPECT_EQ(e.line(), 3);
        EXPECT_STREQ(e.what(), "line 3: unknown key 'elements' in [ris]");
    }
}

TEST(Config, SyntaxErrors)
{
    EXPECT_THROW(parse_config("[nope]\n"), ParseError);
    EXPECT_THROW(parse_config("vpl 20\n"), ParseError);
    EXPECT_THROW(parse_config("vpl =\n"), ParseError);
    EXPECT_THROW(parse_config("vpl = twenty\n"), ParseError);
    EXPECT_THROW(parse_config("bs_position = 1, 2\n"), ParseError);
    EXPECT_THROW(parse_config("[sub6]\n[sub6]\n"), ParseError);
}

TEST(Config, ValidationRunsAfterParse)
{
    try
    {
        parse_config("vpl = -1\n");
        FAIL();
    }
    catch (const ValidationError& e)
    {
        EXPECT_STREQ(e.what(), "vpl >= 0");
    }
}

TEST(Config, CanonicalTextRoundTrips)
{
    for (const std::string& name : preset_names())
    {
        const Scenario s = make_preset(name).scenario;
        const std::string text = to_config_text(s);
        const Scenario back = parse_config(text);
        EXPECT_EQ(to_config_text(back), text) << name;
        EXPECT_EQ(scenario_hash(back), scenario_hash(s)) << name;
    }
    Scenario a = default_scenario();
    Scenario b = a;
    b.ris_list[1].n_elements += 1;
    EXPECT_NE(scenario_hash(a), scenario_hash(b));
    EXPECT_EQ(scenario_hash(a).size(), 16u);
}

TEST(Config, NumbersRoundTripExactly)
{
    for (double x : {0.1, 1.0 / 3.0, 28e9, -174.0, 5e-324, 1e300})
        EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
    EXPECT_EQ(format_number(20.0), "20");
}

TEST(Csv, HeadersMatchReaderContract)
{
    EXPECT_EQ(header_fields(metrics_header),
              (std::vector<std::string>{"sweep_name", "sweep_value", "scheme", "throughput_bps", "outage_prob",
                                        "mean_se_bpshz", "n_slots", "ci_halfwidth_bps"}));
    EXPECT_EQ(header_fields(trajectory_header),
              (std::vector<std::string>{"slot", "time_s", "ue_x", "blocker_x", "blocked_direct", "scheme", "path",
                                        "se_bpshz", "rate_bps", "outage"}));
    EXPECT_EQ(header_fields(regionmap_header),
              (std::vector<std::string>{"blocker_x", "ue_x", "candidate", "mean_gain_db"}));
}

TEST(Csv, MetricsRowsRoundTrip)
{
    MetricsTable t;
    t.sweep_name = "tx_power_dbm";
    t.rows.push_back({30.0, SchemeId::LSRPA, 8.7e7, 0.01, 8.7, 200, 1.5e6});
    t.rows.push_back({30.0, SchemeId::NoRisSub6, 3.8e7, 0.5, 7.6, 200, 2e6});
    std::stringstream buf;
    write_metrics_csv(buf, t);
    const auto rows = read_csv(buf);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][0], "tx_power_dbm");
    EXPECT_EQ(rows[1][2], "LSRPA");
    EXPECT_EQ(rows[2][2], "NoRisSub6");
    EXPECT_EQ(std::stod(rows[1][3]), 8.7e7);
    EXPECT_EQ(rows[1][6], "200");
}

TEST(Csv, TrajectoryAndRegionMapEncoding)
{
    TrajectoryRow r;
    r.slot = 3;
    r.time_s = 0.3;
    r.ue_x = 69.0;
    r.blocked_direct = true;
    r.scheme = SchemeId::LSRPA;
    r.path = PathCandidate::via_ris(1);
    r.outage = false;
    std::stringstream buf;
    write_trajectory_csv(buf, {r});
    const auto rows = read_csv(buf);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][3], "none");
    EXPECT_EQ(rows[1][4], "1");
    EXPECT_EQ(rows[1][6], "RIS2");
    EXPECT_EQ(rows[1][9], "0");

    std::stringstream mb;
    write_regionmap_csv(mb, {RegionMapRow{126.0, 150.0, "RIS1", -120.5}, RegionMapRow{std::nullopt, 2.0, "Direct", -80}});
    const auto m = read_csv(mb);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[1][0], "126");
    EXPECT_EQ(m[1][2], "RIS1");
    EXPECT_EQ(m[2][0], "none");
}
