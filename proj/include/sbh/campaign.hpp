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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbh/config.hpp"
#include "sbh/drop.hpp"
#include "sbh/stats.hpp"

namespace sbh
{
    enum class RateMetric
    {
        backhaul,      // per observed active SC
        access,        // per observed UE
        end_to_end,    // per observed UE
        direct_access, // per observed UE
    };

    std::string_view to_string(RateMetric m);

    /// Metrics an architecture produces.
    std::vector<RateMetric> metrics_for(Architecture a);

    /// Runs drops first .. first + count - 1 one after the other.
    std::vector<DropResult> run_drops_serial(const DropEngine &engine, std::uint64_t first, std::size_t count);

    /// Same drops on an OpenMP team; results land at their drop index, so the
    /// output does not depend on scheduling. threads <= 0 uses the default team.
    std::vector<DropResult> run_drops_parallel(const DropEngine &engine, std::uint64_t first, std::size_t count,
                                               int threads);

    struct CampaignResult
    {
        CampaignConfig config;
        std::vector<DropResult> drops;
        double seconds = 0.0;
        int threads = 1;

        /// Per-drop samples of a metric at a given alpha.
        std::vector<std::vector<double>> per_drop(RateMetric m, double alpha) const;
        CdfSummary summary(RateMetric m, double alpha) const;
        std::size_t total_resamples() const;
        double max_power_error() const;
    };

    /// config.threads == 1 runs serially, anything else in parallel.
    CampaignResult run_campaign(const CampaignConfig &cfg);

    struct PercentileRow
    {
        RateMetric metric = RateMetric::end_to_end;
        double alpha = 0.0;
        std::size_t count = 0;
        double mean = 0.0;
        BootstrapEstimate p5, p50, p95;
    };

    std::vector<PercentileRow> percentile_table(const CampaignResult &r, double alpha);

    struct LosStats
    {
        std::size_t scs = 0;
        std::size_t ues = 0;
        double backhaul = 0.0;   // observed SCs whose serving link is LoS
        double access = 0.0;     // UEs whose serving SC link is LoS
        double joint = 0.0;      // UEs with LoS access and LoS backhaul at their SC
        double direct_access = 0.0;
    };

    LosStats los_stats(const CampaignResult &r);

    struct LoadStats
    {
        std::size_t sectors = 0;
        double attached_per_sector = 0.0;
        double active_per_sector = 0.0;
        double activation = 0.0;     // pooled active / attached
        double ues_per_active = 0.0; // pooled
        double ues_per_sector = 0.0;
        double analytic_activation = 0.0;
        double analytic_ues_per_active = 0.0;
    };

    LoadStats load_stats(const CampaignResult &r);

    struct AlphaSweepRow
    {
        double alpha = 0.0;
        double mean = 0.0;
        BootstrapEstimate p5, p50, p95;
    };

    struct AlphaSweep
    {
        std::vector<AlphaSweepRow> rows;
        double alpha_star_5 = 0.0;
        double alpha_star_50 = 0.0;
        double alpha_star_95 = 0.0;
        double alpha_star_mean = 0.0;
        bool unimodal_5 = false;
        bool unimodal_50 = false;
    };

    /// End-to-end percentiles across alpha. Drops and SINRs are fixed, only
    /// the time split changes. The grid must lie in [0, 1] and contain both
    /// endpoints; it is sorted before use.
    AlphaSweep alpha_sweep(const CampaignResult &r, std::span<const double> grid);

    /// UE rate samples of one architecture: end-to-end at `alpha` for
    /// self-backhaul, direct-access rate otherwise.
    struct RateSeries
    {
        std::string label;
        CdfSummary cdf;
    };

    RateSeries ue_rate_series(const CampaignResult &r, double alpha, std::string label);

    struct Comparison
    {
        std::vector<double> percentiles;
        std::vector<std::string> labels;
        std::vector<std::vector<double>> values; // [series][percentile]

        /// values[a][p] / values[b][p]; infinity when the denominator is 0.
        double ratio(std::size_t a, std::size_t b, std::size_t p) const;
    };

    Comparison compare_architectures(std::span<const RateSeries> series, std::span<const double> percentiles);

} // namespace sbh
