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

#include "sbh/rng.hpp"

#include <cmath>

namespace sbh
{
    namespace
    {
        constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    } // namespace

    Engine::Engine(std::uint64_t seed)
    {
        std::uint64_t z = seed;
        for (auto &word : s_)
        {
            z = mix64(z);
            word = z;
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
            s_[0] = 1;
    }

    Engine::result_type Engine::operator()()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double Engine::normal()
    {
        double u, v, s;
        do
        {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }

    std::complex<double> Engine::complex_normal()
    {
        double u, v, s;
        do
        {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        // Both polar outputs are independent N(0,1); scale to variance 1/2 each.
        const double f = std::sqrt(-std::log(s) / s);
        return {u * f, v * f};
    }

    Engine StreamFactory::stream(std::uint64_t drop, StreamTag tag, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c, std::uint64_t d) const
    {
        std::uint64_t h = mix64(master_ ^ 0x5bd1e9955bd1e995ULL);
        h = mix64(h ^ drop);
        h = mix64(h ^ static_cast<std::uint64_t>(tag));
        h = mix64(h ^ a);
        h = mix64(h ^ b);
        h = mix64(h ^ c);
        h = mix64(h ^ d);
        return Engine(h);
    }

} // namespace sbh
