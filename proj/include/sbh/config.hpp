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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sbh/analytic.hpp"
#include "sbh/channel.hpp"
#include "sbh/mimo.hpp"
#include "sbh/quadrature.hpp"
#include "sbh/rates.hpp"
#include "sbh/scenario.hpp"

namespace sbh
{
    enum class Architecture
    {
        sbh_random,
        sbh_adhoc,
        da_r1,
        da_r3,
    };

    std::string_view to_string(Architecture a);
    Architecture architecture_from_string(std::string_view s);
    bool is_self_backhaul(Architecture a);

    /// Everything a campaign needs. Defaults are the reference parameter set
    /// (19 sites, 500 m ISD, M = 64, 46/30/23 dBm, NF 5/5/9 dB, 10 MHz, 50 RBs).
    struct CampaignConfig
    {
        // [campaign]
        Architecture architecture = Architecture::sbh_random;
        std::size_t n_drops = 500;
        std::uint64_t master_seed = 1;
        std::string output_dir = "out";
        int threads = 0; // 0: OpenMP default
        double alpha = 0.5;
        std::vector<double> alpha_grid;
        bool collect_all_sites = false;
        std::size_t bootstrap_resamples = 200;
        bool dump_sinr = false;
        bool association_only = false;
        std::size_t max_resamples = 20;

        // [layout]
        double inter_site_distance = 500.0;
        std::size_t n_sites = 19;

        // [deployment]
        double mean_ues_per_sector = 16.0;
        double mean_scs_per_sector = 16.0;
        double adhoc_distance = 0.0;
        double min_bs_sc_distance = 35.0;
        double bs_height = 32.0;
        double sc_height = 5.0;
        double ue_height = 1.5;
        AntennaKind sc_access_antenna = AntennaKind::patch;

        // [radio]
        double bs_power_dbm = 46.0;
        double sc_power_dbm = 30.0;
        double ue_power_dbm = 23.0;
        double bs_noise_figure_db = 5.0;
        double sc_noise_figure_db = 5.0;
        double ue_noise_figure_db = 9.0;
        double noise_psd_dbm_hz = -174.0;
        double carrier_hz = 2e9;
        double sc_backhaul_gain_dbi = 5.0;
        double ue_gain_dbi = 0.0;
        FrameConfig frame;

        // [mimo]
        std::size_t antennas = 64;
        double antenna_spacing = 0.5;
        std::size_t pilot_codebook = 16;
        PowerNormalization power_normalization = PowerNormalization::equal_stream_power;
        bool perfect_backhaul_csi = false;
        double condition_limit = 1e12;
        std::size_t rb_samples = 4;
        bool da_all_served = true;
        bool da_wideband_sinr = false;

        // [bs_antenna], [patch], [yagi]
        AntennaPattern bs_antenna = default_bs_antenna();
        AntennaPattern patch = default_patch_antenna();
        AntennaPattern yagi = default_yagi_antenna();

        // [bs_sc], [sc_ue], [bs_ue]
        LinkProfile bs_sc = default_bs_sc_profile();
        LinkProfile sc_ue = default_sc_ue_profile();
        LinkProfile bs_ue = default_bs_ue_profile();

        // [analytic]
        QuadratureSpec quadrature;
        double los_scale = 0.0; // 0: fit to the sc_ue curve
        std::vector<double> density_multipliers;

        CampaignConfig();

        void validate() const;
        DeploymentKind deployment_kind() const;
        DeploymentSpec deployment_spec() const;
        const AntennaPattern &sc_access_pattern() const;
        AnalyticParams analytic_params() const;
    };

    /// Parses TOML-style text: [section] headers, key = value, # comments,
    /// quoted strings and [a, b, c] number lists. Unknown keys are an error.
    CampaignConfig config_from_string(const std::string &text);
    CampaignConfig load_config(const std::filesystem::path &path);

    /// Canonical text form; parsing it back yields the same config.
    std::string to_config_string(const CampaignConfig &cfg);

    /// FNV-1a of the canonical text, hex.
    std::string config_hash(const CampaignConfig &cfg);

} // namespace sbh
