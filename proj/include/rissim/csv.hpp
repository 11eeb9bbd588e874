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
// CSV schemas (header row, comma separator, "." decimals, shortest
// round-trip numbers, booleans as 0/1):
//
//   metrics.csv     sweep_name,sweep_value,scheme,throughput_bps,outage_prob,
//                   mean_se_bpshz,n_slots,ci_halfwidth_bps
//   trajectory.csv  slot,time_s,ue_x,blocker_x,blocked_direct,scheme,path,
//                   se_bpshz,rate_bps,outage
//   regionmap.csv   blocker_x,ue_x,candidate,mean_gain_db
//
// An absent blocker is written as "none".

#pragma once

#include "rissim/config.hpp"
#include "rissim/engine.hpp"
#include "rissim/regionmap.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace rissim {

inline constexpr const char* metrics_header =
    "sweep_name,sweep_value,scheme,throughput_bps,outage_prob,mean_se_bpshz,n_slots,ci_halfwidth_bps";
inline constexpr const char* trajectory_header =
    "slot,time_s,ue_x,blocker_x,blocked_direct,scheme,path,se_bpshz,rate_bps,outage";
inline constexpr const char* regionmap_header = "blocker_x,ue_x,candidate,mean_gain_db";

inline void write_metrics_csv(std::ostream& out, const MetricsTable& t)
{
    out << metrics_header << '\n';
    for (const auto& r : t.rows)
        out << t.sweep_name << ',' << format_number(r.sweep_value) << ',' << scheme_name(r.scheme) << ','
            << format_number(r.throughput_bps) << ',' << format_number(r.outage_prob) << ','
            << format_number(r.mean_se_bpshz) << ',' << r.n_slots << ',' << format_number(r.ci_halfwidth_bps)
            << '\n';
}

inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows)
{
    out << trajectory_header << '\n';
    for (const auto& r : rows)
        out << r.slot << ',' << format_number(r.time_s) << ',' << format_number(r.ue_x) << ','
            << (r.blocker_x ? format_number(*r.blocker_x) : "none") << ',' << (r.blocked_direct ? 1 : 0) << ','
            << scheme_name(r.scheme) << ',' << r.path.name() << ',' << format_number(r.se_bpshz) << ','
            << format_number(r.rate_bps) << ',' << (r.outage ? 1 : 0) << '\n';
}

inline void write_regionmap_csv(std::ostream& out, const std::vector<RegionMapRow>& rows)
{
    out << regionmap_header << '\n';
    for (const auto& r : rows)
        out << (r.blocker_x ? format_number(*r.blocker_x) : "none") << ',' << format_number(r.ue_x) << ','
            << r.candidate << ',' << format_number(r.mean_gain_db) << '\n';
}

/// Splits simple CSV text (no quoting) into rows of fields.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in)
{
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;)
        {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace rissim
