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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sbh/campaign.hpp"
#include "sbh/output.hpp"

using namespace sbh;
namespace fs = std::filesystem;

namespace
{
    CampaignConfig small(Architecture a, std::size_t drops = 4)
    {
        CampaignConfig c;
        c.architecture = a;
        c.n_sites = 7;
        c.n_drops = drops;
        c.rb_samples = 2;
        c.bootstrap_resamples = 50;
        c.master_seed = 2026;
        c.threads = 1;
        return c;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path d = fs::temp_directory_path() / ("sbh_harness_" + name);
        fs::remove_all(d);
        return d;
    }

    bool same_records(const DropResult &a, const DropResult &b)
    {
        if (a.sinr_hash != b.sinr_hash || a.ues.size() != b.ues.size() || a.scs.size() != b.scs.size())
            return false;
        for (std::size_t k = 0; k < a.ues.size(); ++k)
            if (a.ues[k].access_capacity != b.ues[k].access_capacity ||
                a.ues[k].backhaul_share != b.ues[k].backhaul_share || a.ues[k].da_rate != b.ues[k].da_rate)
                return false;
        return true;
    }
} // namespace

TEST_CASE("same seed gives the same drops and the same files")
{
    const CampaignConfig c = small(Architecture::sbh_random, 3);
    const CampaignResult a = run_campaign(c), b = run_campaign(c);
    REQUIRE(a.drops.size() == 3);
    for (std::size_t i = 0; i < a.drops.size(); ++i)
        CHECK(same_records(a.drops[i], b.drops[i]));

    const fs::path da = scratch("det_a"), db = scratch("det_b");
    const auto fa = write_campaign_outputs(da, a);
    write_campaign_outputs(db, b);
    for (const fs::path &f : fa)
        if (f.filename() != "run_manifest.json")
            CHECK_MESSAGE(slurp(f) == slurp(db / f.filename()), f.filename().string());

    CampaignConfig other = c;
    other.master_seed = 2027;
    CHECK(run_campaign(other).drops[0].sinr_hash != a.drops[0].sinr_hash);
}

TEST_CASE("serial and parallel runs agree")
{
    for (Architecture arch : {Architecture::sbh_adhoc, Architecture::da_r3})
    {
        CampaignConfig c = small(arch, 4);
        const CampaignResult s = run_campaign(c);
        c.threads = 4;
        const CampaignResult p = run_campaign(c);
        REQUIRE(p.drops.size() == s.drops.size());
        for (std::size_t i = 0; i < s.drops.size(); ++i)
            CHECK(same_records(s.drops[i], p.drops[i]));
        const fs::path ds = scratch("ser"), dp = scratch("par");
        const auto fs_ = write_campaign_outputs(ds, s);
        write_campaign_outputs(dp, p);
        for (const fs::path &f : fs_)
            if (f.filename() != "run_manifest.json")
                CHECK(slurp(f) == slurp(dp / f.filename()));
    }
}

TEST_CASE("alpha does not change the radio state")
{
    CampaignConfig c = small(Architecture::sbh_adhoc, 2);
    c.alpha = 0.2;
    const CampaignResult a = run_campaign(c);
    c.alpha = 0.8;
    const CampaignResult b = run_campaign(c);
    for (std::size_t i = 0; i < a.drops.size(); ++i)
        CHECK(a.drops[i].sinr_hash == b.drops[i].sinr_hash);
}

TEST_CASE("self-backhaul rates across alpha")
{
    const CampaignResult r = run_campaign(small(Architecture::sbh_adhoc, 3));
    for (const DropResult &d : r.drops)
        for (const UeRecord &u : d.ues)
        {
            CHECK(u.end_to_end(0.0) == 0.0);
            CHECK(u.end_to_end(1.0) == 0.0);
            CHECK(u.end_to_end(0.5) <= u.access_rate(0.5));
            CHECK(u.end_to_end(0.5) <= u.backhaul_rate(0.5));
        }
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i)
        grid.push_back(i / 20.0);
    const AlphaSweep s = alpha_sweep(r, grid);
    REQUIRE(s.rows.size() == 21);
    for (const AlphaSweepRow *row : {&s.rows.front(), &s.rows.back()})
    {
        CHECK(row->p5.value == 0.0);
        CHECK(row->p50.value == 0.0);
        CHECK(row->mean == 0.0);
    }
    CHECK(s.alpha_star_50 > 0.0);
    CHECK(s.alpha_star_50 < 1.0);
    CHECK(s.rows[10].p50.value > 0.0);
    CHECK_THROWS_AS(alpha_sweep(r, std::vector<double>{0.2, 1.0}), std::invalid_argument);
}

TEST_CASE("direct access drops have no small cells")
{
    const CampaignResult r = run_campaign(small(Architecture::da_r1, 2));
    std::size_t ues = 0;
    for (const DropResult &d : r.drops)
    {
        CHECK(d.scs.empty());
        CHECK(d.n_sc == 0);
        for (const UeRecord &u : d.ues)
        {
            CHECK(u.access_capacity == 0.0);
            CHECK(u.backhaul_share == 0.0);
            CHECK(u.da_rate >= 0.0);
            ++ues;
        }
    }
    CHECK(ues > 0);
    CHECK(metrics_for(Architecture::da_r1) == std::vector<RateMetric>{RateMetric::direct_access});
    CHECK_THROWS_AS(alpha_sweep(r, std::vector<double>{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("comparing a series with itself gives ratio 1")
{
    const CampaignResult r = run_campaign(small(Architecture::da_r3, 2));
    const std::vector<RateSeries> series{ue_rate_series(r, 0.0, "a"), ue_rate_series(r, 0.0, "b")};
    const std::vector<double> pct{5.0, 50.0, 95.0};
    const Comparison c = compare_architectures(series, pct);
    for (std::size_t p = 0; p < pct.size(); ++p)
        CHECK(c.ratio(0, 1, p) == 1.0);
}

TEST_CASE("reuse 3 improves the weak direct-access links")
{
    auto p5 = [](Architecture a) {
        CampaignConfig c = small(a, 4);
        c.dump_sinr = true;
        const CampaignResult r = run_campaign(c);
        std::vector<double> s;
        for (const DropResult &d : r.drops)
            s.insert(s.end(), d.da_sinr.begin(), d.da_sinr.end());
        REQUIRE(!s.empty());
        return CdfSummary(std::move(s)).percentile(5.0);
    };
    const double r1 = p5(Architecture::da_r1), r3 = p5(Architecture::da_r3);
    MESSAGE("5th percentile DA SINR: r1 " << r1 << ", r3 " << r3);
    CHECK(r3 >= r1);
}

TEST_CASE("precoders conserve transmit power")
{
    for (Architecture a : {Architecture::sbh_random, Architecture::da_r1})
    {
        const CampaignResult r = run_campaign(small(a, 2));
        CHECK(r.max_power_error() < 1e-9);
    }
}

TEST_CASE("load statistics")
{
    CampaignConfig c = small(Architecture::sbh_random, 6);
    c.association_only = true;
    const CampaignResult r = run_campaign(c);
    const LoadStats s = load_stats(r);
    CHECK(s.sectors == 6 * 3);
    CHECK(s.activation > 0.0);
    CHECK(s.activation <= 1.0);
    CHECK(s.analytic_activation == doctest::Approx(0.5851).epsilon(1e-3));
    for (const DropResult &d : r.drops)
        for (const SectorLoad &l : d.loads)
        {
            CHECK(l.active_scs <= l.attached_scs);
            CHECK(l.served_ues == l.ues);
        }
}
