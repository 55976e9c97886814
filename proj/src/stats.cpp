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

#include "sbh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbh
{
    double nearest_rank(std::span<const double> sorted, double p)
    {
        if (sorted.empty())
            throw std::invalid_argument("percentile of an empty sample");
        if (!(p >= 0.0 && p <= 100.0))
            throw std::invalid_argument("percentile rank must be in [0, 100]");
        const auto n = static_cast<double>(sorted.size());
        auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
        rank = std::clamp<std::size_t>(rank, 1, sorted.size());
        return sorted[rank - 1];
    }

    CdfSummary::CdfSummary(std::vector<double> samples) : sorted_(std::move(samples))
    {
        std::sort(sorted_.begin(), sorted_.end());
    }

    double CdfSummary::mean() const
    {
        if (sorted_.empty())
            return 0.0;
        return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
    }

    double CdfSummary::cdf(double x) const
    {
        if (sorted_.empty())
            return 0.0;
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    BootstrapEstimate bootstrap_percentile(const std::vector<std::vector<double>> &per_drop, double p,
                                           std::size_t resamples, Engine &rng, double level)
    {
        std::vector<double> pooled;
        for (const auto &d : per_drop)
            pooled.insert(pooled.end(), d.begin(), d.end());
        std::sort(pooled.begin(), pooled.end());

        BootstrapEstimate est;
        est.value = nearest_rank(pooled, p);
        est.lower = est.upper = est.value;
        if (resamples == 0 || per_drop.size() < 2)
            return est;

        const std::size_t n = per_drop.size();
        std::vector<double> stats;
        stats.reserve(resamples);
        std::vector<double> buf;
        for (std::size_t b = 0; b < resamples; ++b)
        {
            buf.clear();
            for (std::size_t i = 0; i < n; ++i)
            {
                const auto j = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
                buf.insert(buf.end(), per_drop[j].begin(), per_drop[j].end());
            }
            if (buf.empty())
                continue;
            auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(buf.size())));
            rank = std::clamp<std::size_t>(rank, 1, buf.size());
            std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(rank - 1), buf.end());
            stats.push_back(buf[rank - 1]);
        }
        if (stats.empty())
            return est;
        std::sort(stats.begin(), stats.end());
        const double tail = 50.0 * (1.0 - level);
        est.lower = nearest_rank(stats, tail);
        est.upper = nearest_rank(stats, 100.0 - tail);
        return est;
    }

    std::size_t argmax(std::span<const double> values)
    {
        if (values.empty())
            throw std::invalid_argument("argmax of an empty range");
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] > values[best])
                best = i;
        return best;
    }

    bool is_unimodal(std::span<const double> values, std::span<const double> tolerance)
    {
        if (values.size() != tolerance.size())
            throw std::invalid_argument("one tolerance per point is required");
        if (values.size() < 3)
            return true;
        // Rising phase, then falling phase; a step only counts as a change of
        // direction when it exceeds the combined tolerance of its endpoints.
        bool falling = false;
        for (std::size_t i = 1; i < values.size(); ++i)
        {
            const double step = values[i] - values[i - 1];
            const double tol = tolerance[i] + tolerance[i - 1];
            if (step < -tol)
                falling = true;
            else if (step > tol && falling)
                return false;
        }
        return true;
    }

} // namespace sbh
