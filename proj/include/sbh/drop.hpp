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
#include <vector>

#include "sbh/channel.hpp"
#include "sbh/config.hpp"
#include "sbh/scenario.hpp"

namespace sbh
{
    /// Per-SC outcome. Rates are stored at alpha = 1 so any alpha can be
    /// applied afterwards without touching the SINRs.
    struct ScRecord
    {
        std::size_t sc = 0;
        std::size_t sector = 0; // serving sector
        bool backhaul_los = false;
        bool active = false;
        bool trained = false;
        std::size_t k_l = 0;
        double backhaul_capacity = 0.0; // bps at alpha = 1
    };

    /// Per-UE outcome. Self-backhaul fields are zero in direct-access drops
    /// and vice versa.
    struct UeRecord
    {
        std::size_t ue = 0;
        std::size_t sector = 0; // geometric sector
        std::size_t server = 0; // SC (self-backhaul) or sector (direct access)
        std::size_t k_l = 0;
        double access_capacity = 0.0; // bps at alpha = 0
        double backhaul_share = 0.0;  // server's backhaul at alpha = 1, over K_l
        bool access_los = false;
        bool backhaul_los = false;
        bool da_los = false;
        bool scheduled = true;
        double da_rate = 0.0;

        bool joint_los() const { return access_los && backhaul_los; }
        double access_rate(double alpha) const { return (1.0 - alpha) * access_capacity; }
        double backhaul_rate(double alpha) const { return alpha * backhaul_share; }
        double end_to_end(double alpha) const;
    };

    struct SectorLoad
    {
        std::size_t sector = 0;
        std::size_t attached_scs = 0; // L_i
        std::size_t active_scs = 0;
        std::size_t ues = 0;          // UEs whose server hangs off this sector
        std::size_t served_ues = 0;   // sum of K_l over active SCs (equals ues)
    };

    struct DropResult
    {
        std::uint64_t drop = 0;
        std::size_t resamples = 0;
        std::size_t n_sc = 0;
        std::size_t n_ue = 0;
        std::vector<ScRecord> scs; // observed only
        std::vector<UeRecord> ues; // observed only
        std::vector<SectorLoad> loads;
        std::vector<double> backhaul_sinr; // per observed SC and sampled RB, when dumping
        std::vector<double> da_sinr;
        double max_power_error = 0.0; // relative, over every precoder of the drop
        std::uint64_t sinr_hash = 0;  // FNV-1a over the stored capacities
    };

    /// Positions and attachments of one drop, for snapshots and replay.
    struct DropSnapshot
    {
        Deployment deployment;
        Association association;
        std::vector<std::size_t> ue_sector_server; // direct access attachment
    };

    /// Runs single drops. Immutable after construction, so one engine can be
    /// shared by parallel workers; every random draw is keyed by
    /// (seed, drop, tag, sub-keys).
    class DropEngine
    {
    public:
        explicit DropEngine(CampaignConfig cfg);

        const CampaignConfig &config() const { return cfg_; }
        const NetworkLayout &layout() const { return layout_; }

        /// Throws std::runtime_error if max_resamples singular draws in a row.
        DropResult run(std::uint64_t drop) const;

        DropSnapshot snapshot(std::uint64_t drop) const;

        /// Sectors whose nodes are recorded.
        bool observed(std::size_t sector) const;

    private:
        DropResult attempt(std::uint64_t drop, std::uint64_t key) const;

        CampaignConfig cfg_;
        NetworkLayout layout_;
        ArrayCorrelation corr_;
    };

} // namespace sbh
