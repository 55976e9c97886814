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

#include "sbh/channel.hpp"
#include "sbh/rng.hpp"
#include "sbh/scenario.hpp"

using namespace sbh;

namespace
{
    // Distance on the torus spanned by two lattice vectors, searching a
    // generous neighbourhood of images.
    double torus_distance(const Vec2 &a, const Vec2 &b, const Vec2 &t1, const Vec2 &t2)
    {
        double best = (b - a).norm();
        for (int m = -3; m <= 3; ++m)
            for (int n = -3; n <= 3; ++n)
                best = std::min(best, (b + t1 * m + t2 * n - a).norm());
        return best;
    }

    Vec2 random_in_cluster(const NetworkLayout &lay, Engine &rng)
    {
        const std::size_t site = static_cast<std::size_t>(rng.uniform() * lay.n_sites);
        for (;;)
        {
            const Vec2 p{(2.0 * rng.uniform() - 1.0) * lay.outer_radius, (2.0 * rng.uniform() - 1.0) * lay.outer_radius};
            if (lay.in_site_hexagon(p))
                return lay.site_positions[site] + p;
        }
    }

    Engine test_rng(std::uint64_t a) { return StreamFactory(99).stream(0, StreamTag::test_oracle, a); }
} // namespace

TEST_CASE("layout geometry constants")
{
    const NetworkLayout lay = build_layout(500.0, 19);
    CHECK(lay.outer_radius == doctest::Approx(288.675).epsilon(1e-6));
    CHECK(lay.inner_radius == doctest::Approx(250.0));
    CHECK(lay.sector_density == doctest::Approx(1.3856e-5).epsilon(1e-4));
    CHECK(lay.n_sectors() == 57);
    CHECK(lay.wrap_vectors.size() == 7);
    for (std::size_t site = 0; site < lay.n_sites; ++site)
    {
        for (std::size_t s = 0; s < 3; ++s)
        {
            const double a = lay.sector_boresights[site * 3 + s];
            const double b = lay.sector_boresights[site * 3 + (s + 1) % 3];
            CHECK(std::abs(wrap_angle(b - a)) == doctest::Approx(kTwoPi / 3.0));
        }
    }
}

TEST_CASE("single site has no mirrors")
{
    const NetworkLayout lay = build_layout(500.0, 1);
    CHECK(lay.n_sectors() == 3);
    REQUIRE(lay.wrap_vectors.size() == 1);
    CHECK(lay.wrap_vectors[0].norm() == 0.0);
}

TEST_CASE("bad layouts are rejected")
{
    CHECK_THROWS_AS(build_layout(0.0, 19), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(-10.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(500.0, 4), std::invalid_argument);
}

TEST_CASE("mirror shifts tile the plane")
{
    for (std::size_t n : {std::size_t{7}, std::size_t{19}})
    {
        const NetworkLayout lay = build_layout(500.0, n);
        const double expected = 500.0 * std::sqrt(static_cast<double>(n));
        Vec2 sum;
        for (std::size_t k = 1; k < lay.wrap_vectors.size(); ++k)
        {
            CHECK(lay.wrap_vectors[k].norm() == doctest::Approx(expected));
            sum = sum + lay.wrap_vectors[k];
            const Vec2 &a = lay.wrap_vectors[k];
            const Vec2 &b = lay.wrap_vectors[k % 6 + 1];
            CHECK(std::acos((a.x * b.x + a.y * b.y) / (a.norm() * b.norm())) == doctest::Approx(kPi / 3.0));
        }
        CHECK(sum.norm() < 1e-6);
        // Every site image lands on a lattice point no site already occupies.
        for (std::size_t k = 1; k < lay.wrap_vectors.size(); ++k)
            for (const Vec2 &s : lay.site_positions)
                for (const Vec2 &t : lay.site_positions)
                    CHECK((s + lay.wrap_vectors[k] - t).norm() > 499.0);
    }
}

TEST_CASE("wrap distance matches a brute-force torus search")
{
    const NetworkLayout lay = build_layout(500.0, 19);
    const Vec2 t1 = lay.wrap_vectors[1], t2 = lay.wrap_vectors[2];
    Engine rng = test_rng(1);
    for (int i = 0; i < 2000; ++i)
    {
        const Vec2 a = random_in_cluster(lay, rng), b = random_in_cluster(lay, rng);
        CHECK(lay.wrap_distance(a, b) == doctest::Approx(torus_distance(a, b, t1, t2)).epsilon(1e-12));
    }

    // Two points near opposite edges of the cluster: the mirror image wins.
    auto by_x = [](const Vec2 &u, const Vec2 &v) { return u.x < v.x; };
    const auto [west, east] = std::minmax_element(lay.site_positions.begin(), lay.site_positions.end(), by_x);
    const Vec2 a = *east + Vec2{100.0, 0.0};
    const Vec2 b = *west + Vec2{-100.0, 0.0};
    const double euclid = (b - a).norm();
    const double wrapped = lay.wrap_distance(a, b);
    CHECK(wrapped < euclid);
    CHECK(wrapped == doctest::Approx(torus_distance(a, b, t1, t2)));
}

TEST_CASE("wrap distance is symmetric, bounded and shift invariant")
{
    const NetworkLayout lay = build_layout(500.0, 19);
    Engine rng = test_rng(2);
    for (int i = 0; i < 500; ++i)
    {
        const Vec2 a = random_in_cluster(lay, rng), b = random_in_cluster(lay, rng);
        const double d = lay.wrap_distance(a, b);
        CHECK(d == doctest::Approx(lay.wrap_distance(b, a)).epsilon(1e-12));
        CHECK(d <= (b - a).norm() + 1e-9);
        for (const Vec2 &v : lay.wrap_vectors)
        {
            CHECK(lay.wrap_distance(a + v, b + v) == doctest::Approx(d).epsilon(1e-9));
        }
    }
}

TEST_CASE("geometric sector wedges")
{
    const NetworkLayout lay = build_layout(500.0, 7);
    for (std::size_t site = 0; site < lay.n_sites; ++site)
    {
        for (std::size_t s = 0; s < 3; ++s)
        {
            const double az = lay.sector_boresights[site * 3 + s];
            const Vec2 p = lay.site_positions[site] + Vec2{std::cos(az), std::sin(az)} * 100.0;
            CHECK(lay.geometric_sector(p) == site * 3 + s);
        }
    }
}

TEST_CASE("random deployment counts are Poisson")
{
    const NetworkLayout lay = build_layout(500.0, 7);
    DeploymentSpec spec;
    spec.kind = DeploymentKind::sbh_random;
    std::vector<double> counts;
    for (std::uint64_t d = 0; d < 500; ++d)
    {
        Engine rng = StreamFactory(3).stream(d, StreamTag::node_drop);
        const Deployment dep = drop_nodes(lay, spec, rng);
        std::vector<double> per(lay.n_sectors(), 0.0);
        for (std::size_t s : dep.sc_sector)
            per[s] += 1.0;
        counts.insert(counts.end(), per.begin(), per.end());
        for (const Point3 &p : dep.sc_positions)
        {
            CHECK(p.height == 5.0);
            for (const Vec2 &site : lay.site_positions)
                CHECK(lay.wrap_distance(p.xy, site) >= spec.min_bs_sc_distance);
        }
        for (const Point3 &p : dep.ue_positions)
            CHECK(p.height == 1.5);
    }
    REQUIRE(counts.size() >= 10000);
    double mean = 0.0, var = 0.0;
    for (double c : counts)
        mean += c;
    mean /= static_cast<double>(counts.size());
    for (double c : counts)
        var += (c - mean) * (c - mean);
    var /= static_cast<double>(counts.size() - 1);
    CHECK(var / mean >= 0.9);
    CHECK(var / mean <= 1.1);
}

TEST_CASE("mean SC count over the 19-site cluster")
{
    const NetworkLayout lay = build_layout(500.0, 19);
    DeploymentSpec spec;
    spec.kind = DeploymentKind::sbh_random;
    double total = 0.0;
    for (std::uint64_t d = 0; d < 1000; ++d)
    {
        Engine rng = StreamFactory(5).stream(d, StreamTag::node_drop);
        total += static_cast<double>(drop_nodes(lay, spec, rng).n_sc());
    }
    CHECK(total / 1000.0 == doctest::Approx(912.0).epsilon(0.02));
}

TEST_CASE("ad-hoc placement")
{
    const NetworkLayout lay = build_layout(500.0, 19);
    DeploymentSpec spec;
    spec.kind = DeploymentKind::sbh_adhoc;

    SUBCASE("d = 0 puts the SC above its UE")
    {
        spec.adhoc_distance = 0.0;
        Engine rng = test_rng(4);
        const Deployment dep = drop_nodes(lay, spec, rng);
        REQUIRE(dep.n_sc() == dep.n_ue());
        for (std::size_t l = 0; l < dep.n_sc(); ++l)
        {
            const Point3 &sc = dep.sc_positions[l];
            const Point3 &ue = dep.ue_positions[dep.adhoc_ue[l]];
            CHECK(lay.wrap_distance(sc.xy, ue.xy) == 0.0);
            CHECK(std::hypot(0.0, sc.height - ue.height) == doctest::Approx(3.5));
        }
    }
    SUBCASE("d = 20 keeps the pair 20 m apart, facing the closest site")
    {
        spec.adhoc_distance = 20.0;
        Engine rng = test_rng(5);
        const Deployment dep = drop_nodes(lay, spec, rng);
        REQUIRE(dep.n_sc() == dep.n_ue());
        for (std::size_t l = 0; l < dep.n_sc(); ++l)
        {
            const Point3 &sc = dep.sc_positions[l];
            const Point3 &ue = dep.ue_positions[dep.adhoc_ue[l]];
            const double d2 = lay.wrap_distance(sc.xy, ue.xy);
            CHECK(d2 == doctest::Approx(20.0).epsilon(1e-9));
            CHECK(std::hypot(d2, sc.height - ue.height) == doctest::Approx(20.303).epsilon(1e-4));
            const Vec2 to_sc = lay.wrap_delta(ue.xy, sc.xy);
            const Vec2 to_bs = lay.wrap_delta(ue.xy, lay.site_positions[lay.closest_site(ue.xy)]);
            CHECK(to_sc.x * to_bs.x + to_sc.y * to_bs.y >= -1e-9);
        }
    }
}

TEST_CASE("attach to strongest")
{
    Eigen::MatrixXd rsrp(1, 2);
    rsrp << -80.0, -90.0;
    CHECK(attach_to_strongest(rsrp)[0] == 0);
    rsrp << -90.0, -80.0;
    CHECK(attach_to_strongest(rsrp)[0] == 1);
    rsrp << -85.0, -85.0;
    CHECK(attach_to_strongest(rsrp)[0] == 0);
}

TEST_CASE("association invariants on random RSRP")
{
    Engine rng = test_rng(6);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Index n_ue = 40, n_sc = 12, n_bs = 6;
        Eigen::MatrixXd ue_sc(n_ue, n_sc), sc_bs(n_sc, n_bs);
        for (Eigen::Index i = 0; i < ue_sc.size(); ++i)
            ue_sc.data()[i] = -120.0 + 60.0 * rng.uniform();
        for (Eigen::Index i = 0; i < sc_bs.size(); ++i)
            sc_bs.data()[i] = -120.0 + 60.0 * rng.uniform();
        const Association a = associate_self_backhaul(ue_sc, sc_bs);

        REQUIRE(a.ue_server.size() == static_cast<std::size_t>(n_ue));
        REQUIRE(a.sc_server.size() == static_cast<std::size_t>(n_sc));
        std::multiset<std::size_t> seen;
        for (const auto &set : a.sector_scs)
            seen.insert(set.begin(), set.end());
        CHECK(seen.size() == static_cast<std::size_t>(n_sc));
        CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == static_cast<std::size_t>(n_sc));
        std::size_t served = 0;
        for (std::size_t l = 0; l < static_cast<std::size_t>(n_sc); ++l)
        {
            CHECK((a.sc_active[l] != 0) == !a.sc_ues[l].empty());
            served += a.sc_ues[l].size();
            for (std::size_t k : a.sc_ues[l])
                CHECK(a.ue_server[k] == l);
        }
        CHECK(served == static_cast<std::size_t>(n_ue));

        // A common offset in dB is a common linear factor.
        const Association b = associate_self_backhaul(ue_sc.array() + 17.3, sc_bs.array() - 4.1);
        CHECK(b.ue_server == a.ue_server);
        CHECK(b.sc_server == a.sc_server);
    }
}

TEST_CASE("ad-hoc d = 0 pairs every UE with its own SC under pathloss-only RSRP")
{
    const NetworkLayout lay = build_layout(500.0, 7);
    DeploymentSpec spec;
    spec.kind = DeploymentKind::sbh_adhoc;
    Engine rng = test_rng(7);
    const Deployment dep = drop_nodes(lay, spec, rng);
    const LinkProfile prof = default_sc_ue_profile();
    Eigen::MatrixXd rsrp(static_cast<Eigen::Index>(dep.n_ue()), static_cast<Eigen::Index>(dep.n_sc()));
    for (std::size_t k = 0; k < dep.n_ue(); ++k)
    {
        for (std::size_t l = 0; l < dep.n_sc(); ++l)
        {
            const double d2 = lay.wrap_distance(dep.ue_positions[k].xy, dep.sc_positions[l].xy);
            const double d3 = std::hypot(d2, 3.5);
            rsrp(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 30.0 - pathloss_db(prof, true, d3);
        }
    }
    const auto server = attach_to_strongest(rsrp);
    for (std::size_t l = 0; l < dep.n_sc(); ++l)
        CHECK(server[dep.adhoc_ue[l]] == l);
}
