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

#include "rissim/config.hpp"
#include "rissim/csv.hpp"
#include "rissim/diagnostics.hpp"
#include "rissim/engine.hpp"
#include "rissim/presets.hpp"
#include "rissim/regionmap.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rissim {

inline constexpr const char* version = "0.1.0";

struct RunOptions
{
    std::uint64_t seed = 1;
    std::optional<int> trials;  // default: the preset's
    std::optional<int> n_slots;
    std::filesystem::path out_dir = "out";
    std::optional<std::filesystem::path> cache_dir;  // region-map cache
    unsigned threads = 0;
};

struct RunSummary
{
    std::vector<std::filesystem::path> files;
    std::string scenario_hash;
};

// ------------------------------------------------------------ map cache

inline nlohmann::json region_map_to_json(const RegionMap& m)
{
    nlohmann::json j;
    j["ue_x"] = m.ue_x;
    j["blocker_x"] = m.blocker_x;
    j["step"] = m.step;
    std::vector<std::string> names;
    for (const auto& p : m.assignment)
        names.push_back(p.name());
    j["assignment"] = names;
    j["mean_gain_db"] = m.mean_gain_db;
    return j;
}

inline RegionMap region_map_from_json(const nlohmann::json& j)
{
    RegionMap m;
    m.ue_x = j.at("ue_x").get<std::vector<double>>();
    m.blocker_x = j.at("blocker_x").get<std::vector<double>>();
    m.step = j.at("step").get<double>();
    for (const auto& n : j.at("assignment"))
        m.assignment.push_back(PathCandidate::parse(n.get<std::string>()));
    m.mean_gain_db = j.at("mean_gain_db").get<std::vector<double>>();
    if (m.assignment.size() != m.rows() * m.cols() || m.mean_gain_db.size() != m.assignment.size())
        throw std::runtime_error("region map cache: inconsistent dimensions");
    return m;
}

/// Region maps memoized on disk under the scenario hash.
inline RegionMapProvider cached_region_maps(std::filesystem::path dir)
{
    return [dir](const Scenario& s) {
        const auto file = dir / ("regionmap-" + scenario_hash(s) + ".json");
        if (std::ifstream in(file); in)
        {
            try
            {
                return region_map_from_json(nlohmann::json::parse(in));
            }
            catch (const std::exception&)
            {
                // stale or truncated entry: rebuild below
            }
        }
        RegionMap m = build_region_map(s);
        std::filesystem::create_directories(dir);
        std::ofstream(file) << region_map_to_json(m).dump() << '\n';
        return m;
    };
}

// ------------------------------------------------------------ outputs

inline std::filesystem::path prepare_out_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    return dir;
}

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& w)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    w(out);
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
    return path;
}

inline void write_manifest(const std::filesystem::path& out_dir, nlohmann::json manifest, RunSummary& summary)
{
    manifest["tool"] = "rissim";
    manifest["version"] = version;
    manifest["out_dir"] = out_dir.string();
    manifest["scenario_hash"] = summary.scenario_hash;
    std::vector<std::string> names;
    for (const auto& f : summary.files)
        names.push_back(f.filename().string());
    manifest["files"] = names;
    manifest["diagnostics"] = {{"distance_clamps", diagnostics().distance_clamps.load()},
                               {"grid_clamps", diagnostics().grid_clamps.load()}};
    summary.files.push_back(
        write_file(out_dir / "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; }));
}

inline SweepOptions sweep_options(const RunOptions& opt, int trials, int n_slots)
{
    SweepOptions so;
    so.trials = trials;
    so.n_slots = n_slots;
    so.seed = opt.seed;
    so.threads = opt.threads;
    if (opt.cache_dir)
        so.region_map = cached_region_maps(*opt.cache_dir);
    return so;
}

inline RegionMap region_map_for(const Scenario& s, const RunOptions& opt)
{
    return opt.cache_dir ? cached_region_maps(*opt.cache_dir)(s) : build_region_map(s);
}

inline void check_run_options(const RunOptions& opt)
{
    if (opt.trials && *opt.trials < 1)
        throw ValidationError("trials >= 1");
    if (opt.n_slots && *opt.n_slots < 1)
        throw ValidationError("slots >= 1");
}

/// Runs a preset and writes its CSV(s) plus manifest.json into opt.out_dir.
inline RunSummary run_preset(const Preset& p, const RunOptions& opt)
{
    check_run_options(opt);
    const int trials = opt.trials.value_or(p.default_trials);
    const int n_slots = opt.n_slots.value_or(p.n_slots);
    const auto dir = prepare_out_dir(opt.out_dir);
    RunSummary summary;
    summary.scenario_hash = scenario_hash(p.scenario);

    switch (p.kind)
    {
    case PresetKind::Sweep: {
        const SweepOptions so = sweep_options(opt, trials, n_slots);
        const MetricsTable t = sweep(p.scenario, p.schemes, p.variable, p.values, so);
        summary.files.push_back(write_file(dir / "metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, t); }));
        if (p.impaired)
        {
            const MetricsTable ti = sweep(*p.impaired, p.schemes, p.variable, p.values, so);
            summary.files.push_back(
                write_file(dir / "metrics_impaired.csv", [&](std::ostream& o) { write_metrics_csv(o, ti); }));
        }
        break;
    }
    case PresetKind::Trajectory: {
        const RegionMap map = region_map_for(p.scenario, opt);
        const auto rows = trajectory_snapshot(p.scenario, p.schemes, n_slots, opt.seed, &map);
        summary.files.push_back(
            write_file(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, rows); }));
        break;
    }
    case PresetKind::RegionMap: {
        const auto& g = p.scenario.region_grid;
        const RegionMap map =
            build_region_map(p.scenario, grid_centers(g.x_min, g.x_max, g.step), p.blocker_positions, g.step);
        summary.files.push_back(write_file(
            dir / "regionmap.csv", [&](std::ostream& o) { write_regionmap_csv(o, map_to_figure_rows(map)); }));
        break;
    }
    }
    write_manifest(dir,
                   {{"preset", p.name},
                    {"ris", p.scenario.ris_list.size()},
                    {"seed", opt.seed},
                    {"trials", trials},
                    {"slots", n_slots}},
                   summary);
    return summary;
}

struct CustomSweep
{
    SweepVariable variable = SweepVariable::TxPower;
    std::vector<double> values;
    std::vector<SchemeId> schemes;  // empty: every scheme the scenario supports
};

inline std::vector<SchemeId> supported_schemes(const Scenario& s)
{
    std::vector<SchemeId> out;
    for (SchemeId id : all_schemes)
    {
        try
        {
            check_scheme_supported(id, s);
            out.push_back(id);
        }
        catch (const ConfigurationError&)
        {
        }
    }
    return out;
}

/// Sweep of an arbitrary scenario file; writes metrics.csv and manifest.json.
inline RunSummary run_custom(const std::filesystem::path& config_path, const CustomSweep& spec, const RunOptions& opt)
{
    check_run_options(opt);
    const Scenario s = load_config(config_path.string());
    const auto schemes = spec.schemes.empty() ? supported_schemes(s) : spec.schemes;
    const int trials = opt.trials.value_or(10);
    const int n_slots = opt.n_slots.value_or(200);
    const auto dir = prepare_out_dir(opt.out_dir);
    RunSummary summary;
    summary.scenario_hash = scenario_hash(s);
    const MetricsTable t = sweep(s, schemes, spec.variable, spec.values, sweep_options(opt, trials, n_slots));
    summary.files.push_back(write_file(dir / "metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, t); }));
    write_manifest(dir,
                   {{"config", std::filesystem::absolute(config_path).string()},
                    {"sweep", sweep_variable_name(spec.variable)},
                    {"seed", opt.seed},
                    {"trials", trials},
                    {"slots", n_slots}},
                   summary);
    return summary;
}

/// Region map of a scenario over its configured grid; writes regionmap.csv.
inline RunSummary run_regionmap(const Scenario& s, const std::string& source_key, const std::string& source,
                                const RunOptions& opt)
{
    const auto dir = prepare_out_dir(opt.out_dir);
    RunSummary summary;
    summary.scenario_hash = scenario_hash(s);
    const RegionMap map = region_map_for(s, opt);
    summary.files.push_back(
        write_file(dir / "regionmap.csv", [&](std::ostream& o) { write_regionmap_csv(o, map_to_figure_rows(map, true)); }));
    write_manifest(dir, {{source_key, source}, {"seed", opt.seed}}, summary);
    return summary;
}

}  // namespace rissim
