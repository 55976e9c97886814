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

#include <cstddef>
#include <span>
#include <vector>

#include "sbh/rng.hpp"

namespace sbh
{
    /// Nearest-rank percentile of sorted data: element ceil(p/100 n), 1-based;
    /// p = 0 gives the minimum. Throws on empty input or p outside [0, 100].
    double nearest_rank(std::span<const double> sorted, double p);

    /// Empirical distribution of pooled per-node samples.
    class CdfSummary
    {
    public:
        CdfSummary() = default;
        explicit CdfSummary(std::vector<double> samples);

        std::size_t count() const { return sorted_.size(); }
        bool empty() const { return sorted_.empty(); }
        const std::vector<double> &sorted() const { return sorted_; }

        double percentile(double p) const { return nearest_rank(sorted_, p); }
        double mean() const;

        /// Fraction of samples <= x.
        double cdf(double x) const;

    private:
        std::vector<double> sorted_;
    };

    /// Percentile with a drop-level bootstrap: drops are resampled with
    /// replacement, their samples pooled, and the percentile recomputed.
    struct BootstrapEstimate
    {
        double value = 0.0;
        double lower = 0.0;
        double upper = 0.0;
        double half_width() const { return 0.5 * (upper - lower); }
    };

    BootstrapEstimate bootstrap_percentile(const std::vector<std::vector<double>> &per_drop, double p,
                                           std::size_t resamples, Engine &rng, double level = 0.95);

    /// True if the curve has a single local maximum once steps smaller than
    /// the per-point tolerance are treated as flat.
    bool is_unimodal(std::span<const double> values, std::span<const double> tolerance);

    /// Index of the largest value; ties go to the lowest index.
    std::size_t argmax(std::span<const double> values);

} // namespace sbh
