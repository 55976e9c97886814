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

#include "sbh/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sbh
{
    namespace
    {
        struct Axial
        {
            int q;
            int r;
        };

        int hex_ring(const Axial &a) { return (std::abs(a.q) + std::abs(a.r) + std::abs(a.q + a.r)) / 2; }

        Vec2 axial_to_xy(const Axial &a, double isd)
        {
            return {isd * std::sqrt(3.0) / 2.0 * a.q, isd * (a.r + 0.5 * a.q)};
        }

        Axial rotate60(const Axial &a) { return {-a.r, a.q + a.r}; }

        const Vec2 kHexNormals[3] = {
            {std::sqrt(3.0) / 2.0, 0.5},
            {0.0, 1.0},
            {-std::sqrt(3.0) / 2.0, 0.5},
        };

        Vec2 sample_in_hexagon(const NetworkLayout &layout, Engine &rng)
        {
            const double R = layout.outer_radius;
            const double half = 0.5 * layout.inter_site_distance;
            for (;;)
            {
                Vec2 p{(2.0 * rng.uniform() - 1.0) * R, (2.0 * rng.uniform() - 1.0) * half};
                if (layout.in_site_hexagon(p))
                    return p;
            }
        }
    } // namespace

    bool NetworkLayout::in_site_hexagon(const Vec2 &local) const
    {
        const double half = 0.5 * inter_site_distance;
        for (const auto &n : kHexNormals)
            if (std::abs(local.x * n.x + local.y * n.y) > half)
                return false;
        return true;
    }

    Vec2 NetworkLayout::wrap_delta(const Vec2 &from, const Vec2 &to) const
    {
        const Vec2 direct = to - from;
        Vec2 best = direct;
        double best_d2 = direct.x * direct.x + direct.y * direct.y;
        for (std::size_t k = 1; k < wrap_vectors.size(); ++k)
        {
            const Vec2 c = direct + wrap_vectors[k];
            const double d2 = c.x * c.x + c.y * c.y;
            if (d2 < best_d2)
            {
                best_d2 = d2;
                best = c;
            }
        }
        return best;
    }

    std::size_t NetworkLayout::closest_site(const Vec2 &p) const
    {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n_sites; ++s)
        {
            const double d = wrap_distance(site_positions[s], p);
            if (d < best_d)
            {
                best_d = d;
                best = s;
            }
        }
        return best;
    }

    Vec2 NetworkLayout::wrap_into_cluster(const Vec2 &p) const
    {
        for (const auto &v : wrap_vectors)
        {
            const Vec2 c = p - v;
            for (const auto &site : site_positions)
                if (in_site_hexagon(c - site))
                    return c;
        }
        return p;
    }

    std::size_t NetworkLayout::geometric_sector(const Vec2 &p) const
    {
        const std::size_t site = closest_site(p);
        const double az = wrap_delta(site_positions[site], p).azimuth();
        const double width = kTwoPi / static_cast<double>(sectors_per_site);
        auto s = static_cast<long>(std::floor((az + 0.5 * width) / width));
        const auto n = static_cast<long>(sectors_per_site);
        s = ((s % n) + n) % n;
        return site * sectors_per_site + static_cast<std::size_t>(s);
    }

    NetworkLayout build_layout(double inter_site_distance, std::size_t n_sites)
    {
        if (!(inter_site_distance > 0.0))
            throw std::invalid_argument("inter-site distance must be positive");

        int rings = 0;
        if (n_sites == 1)
            rings = 0;
        else if (n_sites == 7)
            rings = 1;
        else if (n_sites == 19)
            rings = 2;
        else
            throw std::invalid_argument("n_sites must be 1, 7 or 19");

        NetworkLayout layout;
        layout.inter_site_distance = inter_site_distance;
        layout.n_sites = n_sites;
        layout.sectors_per_site = 3;
        layout.outer_radius = inter_site_distance / std::sqrt(3.0);
        layout.inner_radius = inter_site_distance / 2.0;
        const double R = layout.outer_radius;
        layout.sector_density = 3.0 / (1.5 * std::sqrt(3.0) * R * R);

        std::vector<Axial> cells;
        for (int q = -rings; q <= rings; ++q)
            for (int r = std::max(-rings, -q - rings); r <= std::min(rings, -q + rings); ++r)
                cells.push_back({q, r});
        std::stable_sort(cells.begin(), cells.end(), [&](const Axial &a, const Axial &b) {
            const int ra = hex_ring(a), rb = hex_ring(b);
            if (ra != rb)
                return ra < rb;
            const Vec2 pa = axial_to_xy(a, 1.0), pb = axial_to_xy(b, 1.0);
            auto ang = [](const Vec2 &p) {
                double t = std::atan2(p.y, p.x);
                return t < 0.0 ? t + kTwoPi : t;
            };
            return ang(pa) < ang(pb);
        });
        for (const auto &c : cells)
            layout.site_positions.push_back(axial_to_xy(c, inter_site_distance));

        for (std::size_t site = 0; site < n_sites; ++site)
            for (std::size_t s = 0; s < layout.sectors_per_site; ++s)
                layout.sector_boresights.push_back(wrap_angle(kTwoPi * static_cast<double>(s) / 3.0));

        layout.wrap_vectors.push_back({0.0, 0.0});
        if (rings > 0)
        {
            Axial shift{rings + 1, rings};
            for (int k = 0; k < 6; ++k)
            {
                layout.wrap_vectors.push_back(axial_to_xy(shift, inter_site_distance));
                shift = rotate60(shift);
            }
        }
        return layout;
    }

    std::string_view to_string(DeploymentKind kind)
    {
        switch (kind)
        {
        case DeploymentKind::sbh_random:
            return "sbh_random";
        case DeploymentKind::sbh_adhoc:
            return "sbh_adhoc";
        case DeploymentKind::direct_access:
            return "direct_access";
        }
        return "unknown";
    }

    DeploymentKind deployment_kind_from_string(std::string_view s)
    {
        if (s == "sbh_random")
            return DeploymentKind::sbh_random;
        if (s == "sbh_adhoc")
            return DeploymentKind::sbh_adhoc;
        if (s == "direct_access")
            return DeploymentKind::direct_access;
        throw std::invalid_argument("unknown deployment kind: " + std::string(s));
    }

    Deployment drop_nodes(const NetworkLayout &layout, const DeploymentSpec &spec, Engine &rng)
    {
        if (!(spec.mean_ues_per_sector > 0.0))
            throw std::invalid_argument("mean UEs per sector must be positive");
        if (spec.kind == DeploymentKind::sbh_random && !(spec.mean_scs_per_sector > 0.0))
            throw std::invalid_argument("mean SCs per sector must be positive");

        Deployment dep;
        dep.kind = spec.kind;
        dep.adhoc_distance = spec.adhoc_distance;
        dep.mean_ues_per_sector = spec.mean_ues_per_sector;
        dep.mean_scs_per_sector =
            spec.kind == DeploymentKind::sbh_adhoc ? spec.mean_ues_per_sector : spec.mean_scs_per_sector;
        dep.min_bs_sc_distance = spec.min_bs_sc_distance;

        const auto n_sectors = static_cast<double>(layout.n_sectors());
        const auto pick_site = [&]() {
            return std::min(layout.n_sites - 1, static_cast<std::size_t>(rng.uniform() * layout.n_sites));
        };

        const long n_ue = std::poisson_distribution<long>(spec.mean_ues_per_sector * n_sectors)(rng);
        dep.ue_positions.reserve(static_cast<std::size_t>(n_ue));
        for (long k = 0; k < n_ue; ++k)
        {
            const std::size_t site = pick_site();
            const Vec2 p = layout.site_positions[site] + sample_in_hexagon(layout, rng);
            dep.ue_positions.push_back({p, spec.ue_height});
            dep.ue_sector.push_back(layout.geometric_sector(p));
        }

        switch (spec.kind)
        {
        case DeploymentKind::sbh_random:
        {
            const long n_sc = std::poisson_distribution<long>(spec.mean_scs_per_sector * n_sectors)(rng);
            for (long l = 0; l < n_sc; ++l)
            {
                const std::size_t site = pick_site();
                Vec2 local;
                do
                    local = sample_in_hexagon(layout, rng);
                while (local.norm() < spec.min_bs_sc_distance);
                const Vec2 p = layout.site_positions[site] + local;
                dep.sc_positions.push_back({p, spec.sc_height});
                dep.sc_sector.push_back(layout.geometric_sector(p));
            }
            break;
        }
        case DeploymentKind::sbh_adhoc:
        {
            for (std::size_t k = 0; k < dep.ue_positions.size(); ++k)
            {
                const Vec2 ue = dep.ue_positions[k].xy;
                const double psi = (rng.uniform() - 0.5) * kPi;
                Vec2 p = ue;
                if (spec.adhoc_distance > 0.0)
                {
                    const std::size_t site = layout.closest_site(ue);
                    const double toward_bs = layout.wrap_delta(ue, layout.site_positions[site]).azimuth();
                    const double dir = toward_bs + psi;
                    p = layout.wrap_into_cluster(ue + Vec2{std::cos(dir), std::sin(dir)} * spec.adhoc_distance);
                }
                dep.sc_positions.push_back({p, spec.sc_height});
                dep.sc_sector.push_back(layout.geometric_sector(p));
                dep.adhoc_ue.push_back(k);
            }
            break;
        }
        case DeploymentKind::direct_access:
            break;
        }
        return dep;
    }

    std::size_t Association::active_count() const
    {
        return static_cast<std::size_t>(std::count(sc_active.begin(), sc_active.end(), char{1}));
    }

    std::vector<std::size_t> Association::active_scs_of(std::size_t sector) const
    {
        std::vector<std::size_t> out;
        for (std::size_t l : sector_scs[sector])
            if (sc_active[l])
                out.push_back(l);
        return out;
    }

    std::vector<std::size_t> attach_to_strongest(const Eigen::MatrixXd &rsrp_dbm)
    {
        std::vector<std::size_t> server(static_cast<std::size_t>(rsrp_dbm.rows()), 0);
        for (Eigen::Index r = 0; r < rsrp_dbm.rows(); ++r)
        {
            Eigen::Index best = 0;
            for (Eigen::Index c = 1; c < rsrp_dbm.cols(); ++c)
                if (rsrp_dbm(r, c) > rsrp_dbm(r, best))
                    best = c;
            server[static_cast<std::size_t>(r)] = static_cast<std::size_t>(best);
        }
        return server;
    }

    Association associate_self_backhaul(const Eigen::MatrixXd &ue_sc_rsrp_dbm, const Eigen::MatrixXd &sc_bs_rsrp_dbm)
    {
        const auto n_sc = static_cast<std::size_t>(sc_bs_rsrp_dbm.rows());
        const auto n_sectors = static_cast<std::size_t>(sc_bs_rsrp_dbm.cols());

        Association a;
        a.sc_server = attach_to_strongest(sc_bs_rsrp_dbm);
        a.sector_scs.assign(n_sectors, {});
        for (std::size_t l = 0; l < n_sc; ++l)
            a.sector_scs[a.sc_server[l]].push_back(l);

        a.sc_ues.assign(n_sc, {});
        if (n_sc > 0)
            a.ue_server = attach_to_strongest(ue_sc_rsrp_dbm);
        for (std::size_t k = 0; k < a.ue_server.size(); ++k)
            a.sc_ues[a.ue_server[k]].push_back(k);

        a.sc_active.resize(n_sc);
        for (std::size_t l = 0; l < n_sc; ++l)
            a.sc_active[l] = a.sc_ues[l].empty() ? 0 : 1;
        a.sector_ues.assign(n_sectors, {});
        return a;
    }

    Association associate_direct(const Eigen::MatrixXd &ue_bs_rsrp_dbm)
    {
        Association a;
        a.ue_server = attach_to_strongest(ue_bs_rsrp_dbm);
        a.sector_ues.assign(static_cast<std::size_t>(ue_bs_rsrp_dbm.cols()), {});
        for (std::size_t k = 0; k < a.ue_server.size(); ++k)
            a.sector_ues[a.ue_server[k]].push_back(k);
        a.sector_scs.assign(static_cast<std::size_t>(ue_bs_rsrp_dbm.cols()), {});
        return a;
    }

} // namespace sbh
