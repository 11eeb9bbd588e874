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
// rissim run --preset fig2 [--ris 3]      figure presets
// rissim sim --config f.cfg --sweep tx_power_dbm --from 0 --to 50 --step 2
// rissim regionmap (--preset fig5 | --config f.cfg)
//
// Exit codes: 0 ok, 1 usage, 2 invalid configuration, 3 runtime failure.

#include "rissim/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

std::vector<rissim::SchemeId> parse_scheme_list(const std::string& text)
{
    std::vector<rissim::SchemeId> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto comma = text.find(',', start);
        const std::string name = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!name.empty())
            out.push_back(rissim::parse_scheme(name));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator of RIS-assisted blockage pre-avoidance on a highway"};
    app.require_subcommand(1);
    app.fallthrough();

    rissim::RunOptions opt;
    int trials = 0;
    int slots = 0;
    std::string out_dir = "out";
    std::string cache_dir;
    app.add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials (default: per preset)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "Directory for cached region maps");
    app.add_option("--threads", opt.threads, "Worker threads (0 = all cores)")->capture_default_str();

    auto* run = app.add_subcommand("run", "Run a figure preset");
    std::string preset;
    int ris = 2;
    run->add_option("--preset", preset, "fig2 | fig3 | fig4 | fig5 | fig6")->required();
    run->add_option("--ris", ris, "Number of RIS for fig2 (2 or 3)")->capture_default_str();
    auto* run_slots = run->add_option("--slots", slots, "Slots per trial (default: per preset)");

    auto* sim = app.add_subcommand("sim", "Sweep a scenario file");
    std::string config;
    std::string sweep_name;
    std::optional<double> from, to, step;
    std::vector<double> values;
    std::string schemes;
    sim->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--sweep", sweep_name, "tx_power_dbm | ris_elements | phase_noise_bound | vpl_db")->required();
    auto* from_opt = sim->add_option("--from", from, "First sweep value");
    auto* to_opt = sim->add_option("--to", to, "Last sweep value");
    auto* step_opt = sim->add_option("--step", step, "Sweep step");
    auto* values_opt = sim->add_option("--values", values, "Explicit sweep values")->delimiter(',');
    from_opt->needs(to_opt, step_opt)->excludes(values_opt);
    sim->add_option("--schemes", schemes, "Comma-separated scheme names (default: all supported)");
    sim->add_option("--slots", slots, "Slots per trial")->default_val(200);

    auto* rmap = app.add_subcommand("regionmap", "Write the region map of a preset or scenario file");
    std::string rmap_preset, rmap_config;
    auto* rp = rmap->add_option("--preset", rmap_preset, "Preset whose scenario to map");
    auto* rc = rmap->add_option("--config", rmap_config, "Scenario file")->check(CLI::ExistingFile);
    rp->excludes(rc);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        opt.out_dir = out_dir;
        if (!cache_dir.empty())
            opt.cache_dir = cache_dir;
        if (*trials_opt)
            opt.trials = trials;

        rissim::RunSummary summary;
        if (*run)
        {
            if (*run_slots)
                opt.n_slots = slots;
            summary = rissim::run_preset(rissim::make_preset(preset, ris), opt);
        }
        else if (*sim)
        {
            opt.n_slots = slots;
            rissim::CustomSweep spec;
            spec.variable = rissim::parse_sweep_variable(sweep_name);
            if (*values_opt)
                spec.values = values;
            else if (from)
                spec.values = rissim::arithmetic_range(*from, *to, *step);
            else
                throw rissim::ValidationError("sim needs --values or --from/--to/--step");
            spec.schemes = parse_scheme_list(schemes);
            summary = rissim::run_custom(config, spec, opt);
        }
        else
        {
            if (*rp)
                summary = rissim::run_regionmap(rissim::make_preset(rmap_preset).scenario, "preset", rmap_preset, opt);
            else if (*rc)
                summary = rissim::run_regionmap(rissim::load_config(rmap_config), "config", rmap_config, opt);
            else
                throw rissim::ValidationError("regionmap needs --preset or --config");
        }
        for (const auto& f : summary.files)
            std::cout << f.string() << '\n';
        const auto clamps = rissim::diagnostics().distance_clamps.load();
        const auto grid = rissim::diagnostics().grid_clamps.load();
        if (clamps || grid)
            std::cerr << "warning: " << clamps << " distance clamps, " << grid << " region-map grid clamps\n";
        return 0;
    }
    catch (const rissim::ParseError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument& e)  // ValidationError, ConfigurationError
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
