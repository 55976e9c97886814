// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The sbhsim Authors
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

#include <cmath>
#include <numbers>

namespace sbh
{
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
    inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

    /// Wraps an angle to [-pi, pi).
    inline double wrap_angle(double rad)
    {
        double a = std::fmod(rad + kPi, kTwoPi);
        if (a < 0.0)
            a += kTwoPi;
        return a - kPi;
    }

    /// Thermal noise power over `bandwidth_hz` with a receiver noise figure, in dBm.
    inline double thermal_noise_dbm(double psd_dbm_hz, double bandwidth_hz, double noise_figure_db)
    {
        return psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    }

    struct Vec2
    {
        double x = 0.0;
        double y = 0.0;

        Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
        Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
        Vec2 operator*(double s) const { return {x * s, y * s}; }
        double norm() const { return std::hypot(x, y); }
        double azimuth() const { return std::atan2(y, x); }
    };

    /// Ground position plus antenna height.
    struct Point3
    {
        Vec2 xy;
        double height = 0.0;
    };

} // namespace sbh
