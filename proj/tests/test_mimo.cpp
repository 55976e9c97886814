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
#include <cmath>
#include <set>
#include <vector>

#include "sbh/mimo.hpp"
#include "sbh/units.hpp"

using namespace sbh;

namespace
{
    Engine test_rng(std::uint64_t a) { return StreamFactory(13).stream(0, StreamTag::test_oracle, a); }

    CMatrix gaussian(Engine &rng, Eigen::Index m, Eigen::Index n, double scale = 1.0)
    {
        CMatrix h(m, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < m; ++i)
                h(i, j) = scale * rng.complex_normal();
        return h;
    }

    std::vector<std::vector<std::size_t>> nodes_per_sector(std::size_t sectors, std::size_t each)
    {
        std::vector<std::vector<std::size_t>> out(sectors);
        std::size_t id = 0;
        for (auto &v : out)
            for (std::size_t k = 0; k < each; ++k)
                v.push_back(id++);
        return out;
    }
} // namespace

TEST_CASE("pilot overheads")
{
    CHECK(pilot_overhead(PilotReuse::r1) == doctest::Approx(1.0 / 14.0));
    CHECK(pilot_overhead(PilotReuse::orthogonal_backhaul) == doctest::Approx(1.0 / 14.0));
    CHECK(pilot_overhead(PilotReuse::r3) == doctest::Approx(3.0 / 14.0));
}

TEST_CASE("reuse 1 contaminates across sectors")
{
    Engine rng = test_rng(1);
    const PilotPlan p = plan_pilots(PilotReuse::r1, nodes_per_sector(2, 1), 3, 16, rng);
    CHECK(p.contamination[0] == std::vector<std::size_t>{1});
    CHECK(p.contamination[1] == std::vector<std::size_t>{0});
}

TEST_CASE("reuse 3 keeps a site's sectors orthogonal")
{
    Engine rng = test_rng(2);
    const PilotPlan one = plan_pilots(PilotReuse::r3, nodes_per_sector(3, 4), 3, 16, rng);
    for (const auto &c : one.contamination)
        CHECK(c.empty());

    const PilotPlan two = plan_pilots(PilotReuse::r3, nodes_per_sector(9, 4), 3, 16, rng);
    for (std::size_t i = 0; i < 9; ++i)
    {
        for (std::size_t k : two.contamination[i])
        {
            CHECK(k / 3 != i / 3);
            CHECK(k % 3 == i % 3);
        }
        CHECK(two.contamination[i].size() == 2);
    }
}

TEST_CASE("orthogonal backhaul pilots never contaminate")
{
    Engine rng = test_rng(3);
    const PilotPlan p = plan_pilots(PilotReuse::orthogonal_backhaul, nodes_per_sector(57, 10), 3, 16, rng, 64);
    for (const auto &c : p.contamination)
        CHECK(c.empty());
}

TEST_CASE("pilot indices are distinct and owners consistent")
{
    Engine rng = test_rng(4);
    const PilotPlan p = plan_pilots(PilotReuse::r1, nodes_per_sector(21, 12), 3, 16, rng);
    for (std::size_t i = 0; i < 21; ++i)
    {
        const std::set<std::size_t> uniq(p.pilot[i].begin(), p.pilot[i].end());
        CHECK(uniq.size() == p.trained[i].size());
        for (std::size_t j = 0; j < p.trained[i].size(); ++j)
            CHECK(p.owner[i][p.pilot[i][j]] == p.trained[i][j]);
    }
}

TEST_CASE("oversubscribed sector trains a uniform subset")
{
    std::vector<double> hits(20, 0.0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t)
    {
        Engine rng = StreamFactory(5).stream(static_cast<std::uint64_t>(t), StreamTag::test_oracle);
        const PilotPlan p = plan_pilots(PilotReuse::r1, nodes_per_sector(1, 20), 3, 16, rng);
        REQUIRE(p.trained[0].size() == 16);
        REQUIRE(p.untrained[0].size() == 4);
        for (std::size_t n : p.trained[0])
            hits[n] += 1.0;
    }
    for (double h : hits)
        CHECK(h / trials == doctest::Approx(0.8).epsilon(0.025));
}

TEST_CASE("LS estimate")
{
    Engine rng = test_rng(6);
    const CMatrix h = gaussian(rng, 8, 3);
    const CMatrix x = gaussian(rng, 8, 3);

    SUBCASE("no contamination, no noise")
    {
        CHECK((ls_estimate(h, {}, 1.0, 0.0, rng).h_hat - h).norm() == 0.0);
    }
    SUBCASE("one contaminating sector, no noise")
    {
        const std::vector<CMatrix> c{x};
        CHECK((ls_estimate(h, c, 1.0, 0.0, rng).h_hat - h - x).norm() < 1e-14);
    }
    SUBCASE("non-positive pilot power")
    {
        CHECK_THROWS_AS(ls_estimate(h, {}, 0.0, 0.01, rng), std::invalid_argument);
    }
    SUBCASE("noise variance propagates")
    {
        double err = 0.0;
        const int trials = 10000;
        const CMatrix own = gaussian(rng, 64, 1);
        for (int t = 0; t < trials; ++t)
            err += (ls_estimate(own, {}, 1.0, 0.01, rng).h_hat - own).squaredNorm() / 64.0;
        CHECK(err / trials == doctest::Approx(0.01).epsilon(0.05));
    }
}

TEST_CASE("adding a contaminating sector never reduces estimation error")
{
    Engine rng = test_rng(7);
    double e1 = 0.0, e2 = 0.0;
    for (int t = 0; t < 2000; ++t)
    {
        const CMatrix h = gaussian(rng, 16, 2);
        const std::vector<CMatrix> one{gaussian(rng, 16, 2, 0.3)};
        std::vector<CMatrix> two = one;
        two.push_back(gaussian(rng, 16, 2, 0.3));
        e1 += (ls_estimate(h, one, 1.0, 0.01, rng).h_hat - h).squaredNorm();
        e2 += (ls_estimate(h, two, 1.0, 0.01, rng).h_hat - h).squaredNorm();
    }
    CHECK(e2 > e1);
}

TEST_CASE("zero forcing identities")
{
    SUBCASE("orthonormal channel")
    {
        const PrecodeResult r = zf_precode(CMatrix::Identity(2, 2), 2.0);
        CHECK((r.weights - CMatrix::Identity(2, 2)).norm() < 1e-12);
        CHECK(r.power(0) == doctest::Approx(1.0));
        CHECK(r.power(1) == doctest::Approx(1.0));
    }
    SUBCASE("H^H W is diagonal and the power adds up")
    {
        Engine rng = test_rng(8);
        for (PowerNormalization norm : {PowerNormalization::equal_stream_power, PowerNormalization::inverse_gain})
        {
            for (int t = 0; t < 50; ++t)
            {
                const CMatrix h = gaussian(rng, 64, 16);
                const PrecodeResult r = zf_precode(h, 39.8, norm);
                CHECK(std::abs(r.power.sum() - 39.8) <= 1e-9 * 39.8);
                const CMatrix g = h.adjoint() * r.effective();
                const double diag = g.diagonal().cwiseAbs2().minCoeff();
                CMatrix off = g;
                off.diagonal().setZero();
                CHECK(off.cwiseAbs2().maxCoeff() / diag < 1e-20);
                for (Eigen::Index j = 0; j < r.weights.cols(); ++j)
                    CHECK(r.weights.col(j).norm() == doctest::Approx(1.0));
            }
        }
    }
    SUBCASE("inverse-gain power equalises the received amplitude")
    {
        Engine rng = test_rng(9);
        const CMatrix h = gaussian(rng, 32, 8);
        const PrecodeResult r = zf_precode(h, 10.0, PowerNormalization::inverse_gain);
        const CMatrix g = h.adjoint() * r.effective();
        for (Eigen::Index j = 1; j < g.cols(); ++j)
            CHECK(std::norm(g(j, j)) == doctest::Approx(std::norm(g(0, 0))).epsilon(1e-9));
    }
    SUBCASE("degenerate inputs")
    {
        Engine rng = test_rng(10);
        CHECK_THROWS_AS(zf_precode(gaussian(rng, 4, 5), 1.0), SingularChannelError);
        CMatrix h = gaussian(rng, 8, 3);
        h.col(2) = h.col(1);
        CHECK_THROWS_AS(zf_precode(h, 1.0), SingularChannelError);
        CHECK(zf_precode(CMatrix(8, 0), 1.0).streams() == 0);
    }
}

TEST_CASE("downlink SINR")
{
    Engine rng = test_rng(11);
    SUBCASE("single sector with perfect CSI")
    {
        const CMatrix h = gaussian(rng, 64, 8);
        const PrecodeResult r = zf_precode(h, 8.0);
        const std::vector<CMatrix> eff{r.effective()};
        for (std::size_t l = 0; l < 8; ++l)
        {
            const std::vector<CVector> ch{h.col(static_cast<Eigen::Index>(l))};
            const StreamSinr s = downlink_sinr(ch, eff, 0, l, 1e-3);
            CHECK(s.intra < 1e-20 * s.signal);
            const double expected = r.power(static_cast<Eigen::Index>(l)) *
                                    std::norm(ch[0].dot(r.weights.col(static_cast<Eigen::Index>(l)))) / 1e-3;
            CHECK(s.value() == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    SUBCASE("signal equal to noise")
    {
        const std::vector<CVector> ch{CVector::Ones(1)};
        const std::vector<CMatrix> eff{CMatrix::Ones(1, 1)};
        CHECK(downlink_sinr(ch, eff, 0, 0, 1.0).value() == doctest::Approx(1.0));
    }
    SUBCASE("inter-cell term is the sum of per-sector terms")
    {
        std::vector<CMatrix> eff;
        std::vector<CVector> ch;
        for (int i = 0; i < 4; ++i)
        {
            eff.push_back(zf_precode(gaussian(rng, 16, 4), 5.0).effective());
            ch.push_back(gaussian(rng, 16, 1).col(0));
        }
        const StreamSinr all = downlink_sinr(ch, eff, 0, 1, 0.0);
        double sum = 0.0;
        for (std::size_t i = 1; i < 4; ++i)
            sum += interference_from(ch[i], eff[i]);
        CHECK(all.inter == doctest::Approx(sum).epsilon(1e-12));
        // Silent sectors drop out.
        const double dropped = interference_from(ch[2], eff[2]);
        ch[2] = CVector();
        const StreamSinr fewer = downlink_sinr(ch, eff, 0, 1, 0.0);
        CHECK(fewer.inter == doctest::Approx(sum - dropped).epsilon(1e-12));
        CHECK(fewer.inter < all.inter);
    }
}

TEST_CASE("thermal noise arithmetic")
{
    CHECK(thermal_noise_dbm(-174.0, 10e6, 9.0) == doctest::Approx(-95.0));
    // -174 + 10 log10(180e3) + 9 = -174 + 52.553 + 9.
    CHECK(thermal_noise_dbm(-174.0, 180e3, 9.0) == doctest::Approx(-112.447).epsilon(1e-5));
}

TEST_CASE("access SINR")
{
    CHECK(access_sinr(2.0, 0.5, {}, {}, 1.0) == doctest::Approx(1.0));
    for (double p : {1e-3, 1.0, 1e3})
    {
        const std::vector<double> g{1e-7}, pw{p};
        CHECK(access_sinr(p, 1e-7, g, pw, 0.0) == doctest::Approx(1.0));
    }
    const double noise = dbm_to_watt(thermal_noise_dbm(-174.0, 180e3, 9.0));
    const double snr = access_sinr(dbm_to_watt(30.0), db_to_linear(-60.0), {}, {}, noise);
    CHECK(linear_to_db(snr) == doctest::Approx(30.0 - 60.0 + 112.447).epsilon(1e-5));
}
