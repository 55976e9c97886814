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

#include <complex>
#include <cstdint>
#include <limits>

namespace sbh
{
    /// Identifies which part of the simulation consumes a random stream.
    ///
    /// Values are part of the reproducibility contract: appending a tag never
    /// perturbs the streams of existing tags, renumbering one does.
    enum class StreamTag : std::uint64_t
    {
        node_drop = 1,
        bs_sc_large_scale = 2,
        sc_ue_large_scale = 3,
        bs_ue_large_scale = 4,
        sc_orientation = 5,
        backhaul_scheduler = 6,
        backhaul_fading = 7,
        backhaul_estimation = 8,
        da_scheduler = 9,
        da_fading = 10,
        da_estimation = 11,
        access_fading = 12,
        rr_allocation = 13,
        bootstrap = 14,
        test_oracle = 15,
    };

    /// splitmix64 finaliser, used to turn structured keys into seeds.
    constexpr std::uint64_t mix64(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// xoshiro256** engine. Satisfies UniformRandomBitGenerator so it plugs
    /// into the <random> distributions. Cheap to construct, which matters
    /// because every (link, resource block) pair gets its own keyed stream.
    class Engine
    {
    public:
        using result_type = std::uint64_t;

        explicit Engine(std::uint64_t seed);

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()();

        /// Uniform double in [0, 1) from the top 53 bits.
        double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

        /// Standard normal via the polar method; no cached second deviate, so
        /// the output sequence depends only on the seed and the call count.
        double normal();

        /// Circularly-symmetric complex Gaussian with unit variance.
        std::complex<double> complex_normal();

    private:
        std::uint64_t s_[4];
    };

    /// Derives independent engines from (master seed, drop, tag, sub-keys).
    class StreamFactory
    {
    public:
        explicit StreamFactory(std::uint64_t master_seed) : master_(master_seed) {}

        Engine stream(std::uint64_t drop, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0,
                      std::uint64_t c = 0, std::uint64_t d = 0) const;

        std::uint64_t master_seed() const { return master_; }

    private:
        std::uint64_t master_;
    };

} // namespace sbh
