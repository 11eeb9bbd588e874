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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rissim {

/// Road frame: x along the road, y across lanes, z up. Meters.
using Vec3 = Eigen::Vector3d;

struct Pose
{
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();

    bool finite() const { return position.allFinite() && velocity.allFinite(); }
};

/// Constant-velocity extrapolation.
inline Pose advance(const Pose& pose, double dt)
{
    if (!(dt >= 0.0))
        throw std::invalid_argument("advance: dt must be non-negative");
    return Pose{pose.position + pose.velocity * dt, pose.velocity};
}

/// Axis-aligned vehicle body. `pose.position` is the center of the box footprint
/// at its lowest point, so the box spans
///   x in [px - length/2, px + length/2], y in [py - width/2, py + width/2],
///   z in [pz, pz + height].
struct BlockerBox
{
    Pose pose;
    double length = 12.0;
    double width = 2.5;
    double height = 4.0;

    Vec3 lower() const { return pose.position - Vec3(0.5 * length, 0.5 * width, 0.0); }
    Vec3 upper() const { return pose.position + Vec3(0.5 * length, 0.5 * width, height); }

    bool valid() const { return length > 0.0 && width > 0.0 && height > 0.0 && pose.finite(); }

    BlockerBox advanced(double dt) const
    {
        BlockerBox b = *this;
        b.pose = advance(pose, dt);
        return b;
    }

    /// Same center of mass, every dimension scaled by `s`.
    BlockerBox scaled(double s) const
    {
        BlockerBox b = *this;
        b.length *= s;
        b.width *= s;
        b.height *= s;
        b.pose.position.z() += 0.5 * height * (1.0 - s);
        return b;
    }
};

/// True iff the closed segment tx -> rx intersects the blocker box (slab test).
inline bool is_blocked(const Vec3& tx, const Vec3& rx, const BlockerBox& blocker)
{
    const Vec3 lo = blocker.lower();
    const Vec3 hi = blocker.upper();
    const Vec3 d = rx - tx;
    double t_enter = 0.0;
    double t_exit = 1.0;
    for (int axis = 0; axis < 3; ++axis)
    {
        if (std::abs(d[axis]) < 1e-15)
        {
            if (tx[axis] < lo[axis] || tx[axis] > hi[axis])
                return false;
            continue;
        }
        double t0 = (lo[axis] - tx[axis]) / d[axis];
        double t1 = (hi[axis] - tx[axis]) / d[axis];
        if (t0 > t1)
            std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit)
            return false;
    }
    return true;
}

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace rissim
