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

// Serial reference vs the OpenMP drop loop, plus the ZF kernel on its own.

#include <benchmark/benchmark.h>

#include "sbh/campaign.hpp"
#include "sbh/mimo.hpp"

namespace
{
    sbh::CampaignConfig bench_config()
    {
        sbh::CampaignConfig c;
        c.architecture = sbh::Architecture::sbh_adhoc;
        c.n_sites = 7;
        c.rb_samples = 2;
        return c;
    }

    void BM_DropsSerial(benchmark::State &state)
    {
        const sbh::DropEngine engine(bench_config());
        const auto n = static_cast<std::size_t>(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(sbh::run_drops_serial(engine, 0, n));
        state.SetItemsProcessed(state.iterations() * state.range(0));
    }

    void BM_DropsParallel(benchmark::State &state)
    {
        const sbh::DropEngine engine(bench_config());
        const auto n = static_cast<std::size_t>(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(sbh::run_drops_parallel(engine, 0, n, 0));
        state.SetItemsProcessed(state.iterations() * state.range(0));
    }

    void BM_ZeroForcing(benchmark::State &state)
    {
        const auto m = static_cast<Eigen::Index>(state.range(0));
        const auto n = static_cast<Eigen::Index>(state.range(1));
        sbh::Engine rng(7);
        sbh::CMatrix h(m, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < m; ++i)
                h(i, j) = rng.complex_normal();
        for (auto _ : state)
            benchmark::DoNotOptimize(sbh::zf_precode(h, 40.0));
    }
} // namespace

BENCHMARK(BM_DropsSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DropsParallel)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZeroForcing)->Args({64, 16})->Args({64, 32})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
