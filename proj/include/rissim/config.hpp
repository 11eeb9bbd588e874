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
//
// Scenario files are line-oriented:
//
//   # comment
//   carrier_freq = 28e9
//   bs_position = 0, 20, 10
//   [ris]                 # repeatable; each header opens a new RIS
//   position = 199.87, 15, 5
//   n_elements = 200
//
// Sections: [ris], [repeater] (repeatable), [extra_bs], [sub6], [blocker].
// Unknown keys and sections are errors.

#pragma once

#include "rissim/errors.hpp"
#include "rissim/rng.hpp"
#include "rissim/scenario.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace rissim {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace config_detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(std::string_view v, int line)
{
    v = trim(v);
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
    return x;
}

inline long long to_integer(std::string_view v, int line)
{
    v = trim(v);
    long long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError(line, "expected an integer, got '" + std::string(v) + "'");
    return x;
}

inline int to_int(std::string_view v, int line) { return static_cast<int>(to_integer(v, line)); }

inline bool to_bool(std::string_view v, int line)
{
    v = trim(v);
    if (v == "true" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "off")
        return false;
    throw ParseError(line, "expected true or false, got '" + std::string(v) + "'");
}

inline Vec3 to_vec3(std::string_view v, int line)
{
    Vec3 out;
    int i = 0;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = v.find(',', start);
        if (i == 3)
            throw ParseError(line, "expected three comma-separated components");
        out[i++] = to_double(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start), line);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (i != 3)
        throw ParseError(line, "expected three comma-separated components");
    return out;
}

inline std::string vec3_text(const Vec3& v)
{
    return format_number(v.x()) + ", " + format_number(v.y()) + ", " + format_number(v.z());
}

using Setter = std::function<void(std::string_view, int)>;

}  // namespace config_detail

/// Parses scenario text. Missing keys keep Scenario's member defaults; the
/// result is validated.
inline Scenario parse_config(std::string_view text)
{
    using namespace config_detail;
    Scenario s;
    std::string section;
    std::optional<BlockerBox> blocker;

    auto number = [](double& dst) -> Setter { return [&dst](std::string_view v, int l) { dst = to_double(v, l); }; };
    auto integer = [](int& dst) -> Setter { return [&dst](std::string_view v, int l) { dst = to_int(v, l); }; };
    auto flag = [](bool& dst) -> Setter { return [&dst](std::string_view v, int l) { dst = to_bool(v, l); }; };
    auto vec = [](Vec3& dst) -> Setter { return [&dst](std::string_view v, int l) { dst = to_vec3(v, l); }; };

    auto top_level = [&]() -> std::map<std::string, Setter, std::less<>> {
        auto& c = s.channel;
        auto& p = s.schemes;
        auto& g = s.region_grid;
        return {
            {"carrier_freq", number(s.carrier_freq)},
            {"bandwidth", number(s.bandwidth)},
            {"bs_position", vec(s.bs_position)},
            {"bs_antennas", integer(s.bs_antennas)},
            {"ue_antennas", integer(s.ue_antennas)},
            {"tx_power_dbm", number(s.tx_power_dbm)},
            {"noise_psd_dbm_hz", number(s.noise_psd_dbm_hz)},
            {"noise_figure_db", number(s.noise_figure_db)},
            {"vpl", number(s.vpl_db)},
            {"rate_threshold", number(s.rate_threshold)},
            {"slot_duration", number(s.slot_duration)},
            {"seed", [&s](std::string_view v, int l) {
                 const long long x = to_integer(v, l);
                 if (x < 0)
                     throw ParseError(l, "seed must be non-negative");
                 s.seed = static_cast<std::uint64_t>(x);
             }},
            {"impairments", flag(s.impairments.enabled)},
            {"kappa_tx_sq", number(s.impairments.kappa_tx_sq)},
            {"kappa_rx_sq", number(s.impairments.kappa_rx_sq)},
            {"ue_position", vec(s.ue_start.position)},
            {"ue_velocity", vec(s.ue_start.velocity)},
            {"exponent_direct", number(c.exponent_direct)},
            {"exponent_bs_ris", number(c.exponent_bs_ris)},
            {"exponent_ris_ue", number(c.exponent_ris_ue)},
            {"exponent_repeater", number(c.exponent_repeater)},
            {"exponent_extra_bs", number(c.exponent_extra_bs)},
            {"k_direct_db", number(c.k_direct_db)},
            {"k_ris_db", number(c.k_ris_db)},
            {"k_repeater_db", number(c.k_repeater_db)},
            {"antenna_spacing", number(c.antenna_spacing)},
            {"prediction_horizon_slots", integer(p.prediction_horizon_slots)},
            {"report_interval_slots", integer(p.report_interval_slots)},
            {"prediction_noise_std", number(p.prediction_noise_std)},
            {"handover_penalty_slots", integer(p.handover_penalty_slots)},
            {"csit_overhead_per_path", number(p.csit_overhead_per_path)},
            {"throughput_mode", [&s](std::string_view v, int l) {
                 v = trim(v);
                 if (v == "adaptive")
                     s.schemes.throughput_mode = ThroughputMode::Adaptive;
                 else if (v == "fixed")
                     s.schemes.throughput_mode = ThroughputMode::Fixed;
                 else
                     throw ParseError(l, "throughput_mode must be adaptive or fixed");
             }},
            {"max_iters", integer(p.max_iters)},
            {"tol", number(p.tol)},
            {"regionmap_step", number(g.step)},
            {"regionmap_x_min", number(g.x_min)},
            {"regionmap_x_max", number(g.x_max)},
            {"regionmap_monte_carlo", flag(g.monte_carlo)},
            {"regionmap_mc_draws", integer(g.mc_draws)},
        };
    };

    auto keys_for = [&]() -> std::map<std::string, Setter, std::less<>> {
        if (section.empty())
            return top_level();
        if (section == "ris")
        {
            auto& r = s.ris_list.back();
            return {{"position", vec(r.position)},
                    {"n_elements", integer(r.n_elements)},
                    {"element_spacing", number(r.element_spacing)},
                    {"phase_noise_bound", number(r.phase_noise_bound)},
                    {"element_gain_db", number(r.element_gain_db)}};
        }
        if (section == "repeater")
        {
            auto& r = s.repeater_list.back();
            return {{"position", vec(r.position)},
                    {"antennas", integer(r.antennas)},
                    {"tx_power_dbm", number(r.tx_power_dbm)}};
        }
        if (section == "extra_bs")
            return {{"position", vec(s.extra_bs->position)}, {"antennas", integer(s.extra_bs->antennas)}};
        if (section == "sub6")
        {
            auto& b = *s.sub6;
            return {{"carrier_freq", number(b.carrier_freq)},     {"bandwidth", number(b.bandwidth)},
                    {"vpl", number(b.vpl_db)},                     {"bs_antennas", integer(b.bs_antennas)},
                    {"pathloss_exponent", number(b.pathloss_exponent)}, {"k_factor_db", number(b.k_factor_db)}};
        }
        auto& b = *blocker;
        return {{"position", vec(b.pose.position)}, {"velocity", vec(b.pose.velocity)},
                {"length", number(b.length)},       {"width", number(b.width)},
                {"height", number(b.height)}};
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        std::string_view l = raw;
        if (const auto hash = l.find('#'); hash != std::string_view::npos)
            l = l.substr(0, hash);
        l = trim(l);
        if (l.empty())
            continue;
        if (l.front() == '[')
        {
            if (l.back() != ']')
                throw ParseError(line, "unterminated section header");
            const std::string name(trim(l.substr(1, l.size() - 2)));
            auto once = [&](bool present) {
                if (present)
                    throw ParseError(line, "section [" + name + "] may appear only once");
            };
            if (name == "ris")
                s.ris_list.emplace_back();
            else if (name == "repeater")
                s.repeater_list.emplace_back();
            else if (name == "extra_bs")
            {
                once(s.extra_bs.has_value());
                s.extra_bs.emplace();
            }
            else if (name == "sub6")
            {
                once(s.sub6.has_value());
                s.sub6.emplace();
            }
            else if (name == "blocker")
            {
                once(blocker.has_value());
                blocker.emplace();
            }
            else
                throw ParseError(line, "unknown section [" + name + "]");
            section = name;
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line, "expected 'key = value'");
        const std::string_view key = trim(l.substr(0, eq));
        const std::string_view value = trim(l.substr(eq + 1));
        if (value.empty())
            throw ParseError(line, "missing value for '" + std::string(key) + "'");
        const auto keys = keys_for();
        const auto it = keys.find(key);
        if (it == keys.end())
        {
            std::string where = section.empty() ? "top level" : "[" + section + "]";
            throw ParseError(line, "unknown key '" + std::string(key) + "' in " + where);
        }
        it->second(value, line);
    }
    s.blocker = blocker;
    s.validate();
    return s;
}

inline Scenario load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

/// Canonical text of a scenario: every key, fixed order, shortest round-trip
/// numbers. parse_config(to_config_text(s)) reproduces s.
inline std::string to_config_text(const Scenario& s)
{
    using config_detail::vec3_text;
    std::ostringstream o;
    auto kv = [&o](std::string_view k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto num = [&kv](std::string_view k, double v) { kv(k, format_number(v)); };
    auto bool_text = [](bool b) { return std::string(b ? "true" : "false"); };

    num("carrier_freq", s.carrier_freq);
    num("bandwidth", s.bandwidth);
    kv("bs_position", vec3_text(s.bs_position));
    num("bs_antennas", s.bs_antennas);
    num("ue_antennas", s.ue_antennas);
    num("tx_power_dbm", s.tx_power_dbm);
    num("noise_psd_dbm_hz", s.noise_psd_dbm_hz);
    num("noise_figure_db", s.noise_figure_db);
    num("vpl", s.vpl_db);
    num("rate_threshold", s.rate_threshold);
    num("slot_duration", s.slot_duration);
    kv("seed", std::to_string(s.seed));
    kv("impairments", bool_text(s.impairments.enabled));
    num("kappa_tx_sq", s.impairments.kappa_tx_sq);
    num("kappa_rx_sq", s.impairments.kappa_rx_sq);
    kv("ue_position", vec3_text(s.ue_start.position));
    kv("ue_velocity", vec3_text(s.ue_start.velocity));
    const auto& c = s.channel;
    num("exponent_direct", c.exponent_direct);
    num("exponent_bs_ris", c.exponent_bs_ris);
    num("exponent_ris_ue", c.exponent_ris_ue);
    num("exponent_repeater", c.exponent_repeater);
    num("exponent_extra_bs", c.exponent_extra_bs);
    num("k_direct_db", c.k_direct_db);
    num("k_ris_db", c.k_ris_db);
    num("k_repeater_db", c.k_repeater_db);
    num("antenna_spacing", c.antenna_spacing);
    const auto& p = s.schemes;
    num("prediction_horizon_slots", p.prediction_horizon_slots);
    num("report_interval_slots", p.report_interval_slots);
    num("prediction_noise_std", p.prediction_noise_std);
    num("handover_penalty_slots", p.handover_penalty_slots);
    num("csit_overhead_per_path", p.csit_overhead_per_path);
    kv("throughput_mode", p.throughput_mode == ThroughputMode::Fixed ? "fixed" : "adaptive");
    num("max_iters", p.max_iters);
    num("tol", p.tol);
    const auto& g = s.region_grid;
    num("regionmap_step", g.step);
    num("regionmap_x_min", g.x_min);
    num("regionmap_x_max", g.x_max);
    kv("regionmap_monte_carlo", bool_text(g.monte_carlo));
    num("regionmap_mc_draws", g.mc_draws);

    for (const auto& r : s.ris_list)
    {
        o << "\n[ris]\n";
        kv("position", vec3_text(r.position));
        num("n_elements", r.n_elements);
        num("element_spacing", r.element_spacing);
        num("phase_noise_bound", r.phase_noise_bound);
        num("element_gain_db", r.element_gain_db);
    }
    for (const auto& r : s.repeater_list)
    {
        o << "\n[repeater]\n";
        kv("position", vec3_text(r.position));
        num("antennas", r.antennas);
        num("tx_power_dbm", r.tx_power_dbm);
    }
    if (s.extra_bs)
    {
        o << "\n[extra_bs]\n";
        kv("position", vec3_text(s.extra_bs->position));
        num("antennas", s.extra_bs->antennas);
    }
    if (s.sub6)
    {
        const auto& b = *s.sub6;
        o << "\n[sub6]\n";
        num("carrier_freq", b.carrier_freq);
        num("bandwidth", b.bandwidth);
        num("vpl", b.vpl_db);
        num("bs_antennas", b.bs_antennas);
        num("pathloss_exponent", b.pathloss_exponent);
        num("k_factor_db", b.k_factor_db);
    }
    if (s.blocker)
    {
        const auto& b = *s.blocker;
        o << "\n[blocker]\n";
        kv("position", vec3_text(b.pose.position));
        kv("velocity", vec3_text(b.pose.velocity));
        num("length", b.length);
        num("width", b.width);
        num("height", b.height);
    }
    return o.str();
}

/// FNV-1a 64 of the canonical text, as 16 hex digits.
inline std::string scenario_hash(const Scenario& s)
{
    const std::uint64_t h = StreamKey::fnv1a(to_config_text(s));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rissim
