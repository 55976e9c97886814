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

#include "sbh/mimo.hpp"
#include "sbh/rng.hpp"

namespace sbh
{
    /// TDD frame. Rates are long-term averages: alpha is a time fraction.
    struct FrameConfig
    {
        double alpha = 0.5;
        double slot_duration = 1e-3;
        double training_symbols = 1.0; // tau, in OFDM symbols
        double symbols_per_slot = 14.0;
        double bandwidth = 10e6;
        std::size_t resource_blocks = 50;
        double rb_bandwidth = 180e3;

        double training_fraction() const { return training_symbols / symbols_per_slot; }
        /// Throws std::invalid_argument if the invariants do not hold.
        void validate() const;
    };

    /// alpha (1 - tau/T) BW log2(1 + sinr).
    double backhaul_rate(const FrameConfig &frame, double sinr);

    /// Round-robin RB split among n_ues: floor(Q/n) each, the remainder to
    /// randomly chosen UEs. Returns the owning UE (0..n_ues-1) of each RB;
    /// each UE gets one contiguous block.
    std::vector<std::size_t> rr_allocate(std::size_t resource_blocks, std::size_t n_ues, Engine &rng);

    /// (1 - alpha) (BW/Q) sum over RBs owned by `ue` of log2(1 + sinr[q]).
    double access_rate(const FrameConfig &frame, std::span<const std::size_t> allocation, std::size_t ue,
                       std::span<const double> per_rb_sinr);

    /// min(backhaul / K_l, access). Throws on K_l == 0.
    double end_to_end(double backhaul, std::size_t k_l, double access);

    /// (1 - overhead) BW log2(1 + sinr), overhead 1/14 (r1) or 3/14 (r3).
    double da_rate(const FrameConfig &frame, PilotReuse reuse, double sinr);

} // namespace sbh
