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
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sbh/channel.hpp"
#include "sbh/rng.hpp"

namespace sbh
{
    enum class PilotReuse
    {
        r1,
        r3,
        orthogonal_backhaul,
    };

    std::string_view to_string(PilotReuse r);

    /// Fraction of the slot spent on uplink pilots (1 or 3 of 14 symbols).
    double pilot_overhead(PilotReuse r);

    inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

    struct PilotPlan
    {
        PilotReuse reuse = PilotReuse::r1;
        std::size_t codebook = 16;
        double overhead = 1.0 / 14.0;
        std::vector<std::vector<std::size_t>> trained;       // node ids per sector
        std::vector<std::vector<std::size_t>> pilot;         // pilot index of each trained node
        std::vector<std::vector<std::size_t>> untrained;     // overflow, unscheduled this drop
        std::vector<std::vector<std::size_t>> contamination; // sectors sharing pilots with each sector
        std::vector<std::vector<std::size_t>> owner;         // owner[sector][pilot] -> node or kNoNode
    };

    /// Assigns pilots to the nodes `served[i]` of each sector i. At most
    /// `capacity` nodes per sector are trained (0 means the codebook size);
    /// overflow is picked uniformly at random. Pilot indices are a random
    /// permutation so the contamination pairing differs from drop to drop.
    PilotPlan plan_pilots(PilotReuse reuse, const std::vector<std::vector<std::size_t>> &served,
                          std::size_t sectors_per_site, std::size_t codebook, Engine &rng,
                          std::size_t capacity = 0);

    struct EstimatedChannels
    {
        CMatrix h_hat;
        double noise_variance = 0.0; // per entry, sigma^2 / P_ul
    };

    /// LS estimate: own + sum of contaminating matrices + sqrt(sigma^2/P_ul) CN(0,1).
    EstimatedChannels ls_estimate(const CMatrix &own, std::span<const CMatrix> contamination, double ul_power,
                                  double noise_var, Engine &rng);

    class SingularChannelError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class PowerNormalization
    {
        equal_stream_power, // rho_l = P/N, unit-norm columns
        inverse_gain,       // rho_l proportional to ||v_l||^2, equal effective gain
    };

    std::string_view to_string(PowerNormalization n);
    PowerNormalization power_normalization_from_string(std::string_view s);

    struct PrecodeResult
    {
        CMatrix zf;             // H_hat (H_hat^H H_hat)^-1
        CMatrix weights;        // unit-norm columns of zf
        Eigen::VectorXd power;  // rho per stream
        double total_power = 0.0;
        double condition_number = 0.0; // of the Gram matrix

        std::size_t streams() const { return static_cast<std::size_t>(weights.cols()); }
        /// W diag(sqrt(rho)): the transmitted per-stream vectors.
        CMatrix effective() const { return weights * power.cwiseSqrt().asDiagonal(); }
    };

    /// ZF precoder. Throws SingularChannelError when N > M or the Gram matrix
    /// condition number exceeds `condition_limit`.
    PrecodeResult zf_precode(const CMatrix &h_hat, double total_power,
                             PowerNormalization norm = PowerNormalization::equal_stream_power,
                             double condition_limit = 1e12);

    /// Power received through channel h from all streams of a precoder,
    /// optionally leaving out one stream.
    double interference_from(const CVector &h, const CMatrix &effective_weights,
                             std::size_t exclude = kNoNode);

    struct StreamSinr
    {
        double signal = 0.0;
        double intra = 0.0;
        double inter = 0.0;
        double noise = 0.0;

        double value() const { return signal / (intra + inter + noise); }
    };

    /// Downlink SINR of stream `stream` of sector `serving`. channels[i] is the
    /// true channel from sector i to the receiver (empty to skip a silent
    /// sector), effective[i] that sector's W diag(sqrt(rho)).
    StreamSinr downlink_sinr(std::span<const CVector> channels, std::span<const CMatrix> effective,
                             std::size_t serving, std::size_t stream, double noise_power);

    /// Single-antenna access SINR on one RB: P |g|^2 over sum P' |g'|^2 plus noise.
    /// Gains are linear power gains |g|^2.
    double access_sinr(double serving_power, double serving_gain, std::span<const double> interferer_gains,
                       std::span<const double> interferer_powers, double noise_power);

} // namespace sbh
