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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sbh/analytic.hpp"
#include "sbh/campaign.hpp"
#include "sbh/drop.hpp"

namespace sbh
{
    namespace fs = std::filesystem;

    /// Git revision baked in at configure time.
    const char *git_revision();

    /// Formats a double for CSV output (%.10g). Every table goes through this
    /// so that reruns are byte-identical.
    std::string csv_number(double v);

    void write_cdf_csv(const fs::path &path, const CdfSummary &cdf);
    void write_percentiles_csv(const fs::path &path, const std::vector<PercentileRow> &rows);
    void write_los_csv(const fs::path &path, const LosStats &s);
    void write_load_csv(const fs::path &path, const LoadStats &s);
    void write_alpha_sweep_csv(const fs::path &path, const AlphaSweep &sweep);
    void write_analytic_sweep_csv(const fs::path &path, const AnalyticSweep &sweep);
    void write_comparison_csv(const fs::path &path, const Comparison &c);
    void write_sinr_dump_csv(const fs::path &path, const CampaignResult &r);

    /// run_manifest.json: config hash and text, seed, revision, timing and
    /// any extra string fields.
    void write_manifest(const fs::path &path, const CampaignConfig &cfg, double seconds, int threads,
                        const std::map<std::string, std::string> &extra = {});

    /// Positions and attachments of one drop as JSON.
    void write_snapshot_json(const fs::path &path, const NetworkLayout &layout, const DropSnapshot &snap);

    /// Every per-campaign table into `dir`: cdf_*.csv for the architecture's
    /// metrics at config.alpha, percentiles, LoS and load statistics, and
    /// the manifest. Returns the files written.
    std::vector<fs::path> write_campaign_outputs(const fs::path &dir, const CampaignResult &r);

} // namespace sbh
