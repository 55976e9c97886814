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

#include "sbh/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbh
{
    void FrameConfig::validate() const
    {
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("alpha must be in [0, 1]");
        if (!(training_fraction() >= 0.0 && training_fraction() < 1.0))
            throw std::invalid_argument("training must leave room for data");
        if (!(bandwidth > 0.0) || resource_blocks == 0)
            throw std::invalid_argument("bandwidth and RB count must be positive");
        if (static_cast<double>(resource_blocks) * rb_bandwidth > bandwidth)
            throw std::invalid_argument("RBs exceed the channel bandwidth");
    }

    double backhaul_rate(const FrameConfig &frame, double sinr)
    {
        return frame.alpha * (1.0 - frame.training_fraction()) * frame.bandwidth * std::log2(1.0 + sinr);
    }

    std::vector<std::size_t> rr_allocate(std::size_t resource_blocks, std::size_t n_ues, Engine &rng)
    {
        if (n_ues == 0)
            throw std::invalid_argument("round robin needs at least one UE");
        std::vector<std::size_t> count(n_ues, resource_blocks / n_ues);
        std::vector<std::size_t> order(n_ues);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = n_ues; i > 1; --i)
        {
            const auto j = std::min(i - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(i)));
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t r = 0; r < resource_blocks % n_ues; ++r)
            ++count[order[r]];

        std::vector<std::size_t> owner;
        owner.reserve(resource_blocks);
        for (std::size_t k = 0; k < n_ues; ++k)
            owner.insert(owner.end(), count[k], k);
        return owner;
    }

    double access_rate(const FrameConfig &frame, std::span<const std::size_t> allocation, std::size_t ue,
                       std::span<const double> per_rb_sinr)
    {
        double sum = 0.0;
        for (std::size_t q = 0; q < allocation.size(); ++q)
            if (allocation[q] == ue)
                sum += std::log2(1.0 + per_rb_sinr[q]);
        return (1.0 - frame.alpha) * frame.bandwidth / static_cast<double>(frame.resource_blocks) * sum;
    }

    double end_to_end(double backhaul, std::size_t k_l, double access)
    {
        if (k_l == 0)
            throw std::invalid_argument("end-to-end rate needs K_l >= 1");
        return std::min(backhaul / static_cast<double>(k_l), access);
    }

    double da_rate(const FrameConfig &frame, PilotReuse reuse, double sinr)
    {
        const double overhead = frame.training_fraction() * (reuse == PilotReuse::r3 ? 3.0 : 1.0);
        return (1.0 - overhead) * frame.bandwidth * std::log2(1.0 + sinr);
    }

} // namespace sbh
