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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sbh/rng.hpp"
#include "sbh/units.hpp"

namespace sbh
{
    /// Hexagonal macro layout with toroidal wraparound.
    ///
    /// Sites sit on a hexagonal lattice with neighbours at 30 + k*60 degrees;
    /// sector s of every site has boresight s * 120 degrees (s = 0, 1, 2), so
    /// boresights point at hexagon corners, between two neighbouring sites.
    /// Sector index = site * sectors_per_site + s.
    struct NetworkLayout
    {
        double inter_site_distance = 0.0;
        std::size_t n_sites = 0;
        std::size_t sectors_per_site = 3;
        std::vector<Vec2> site_positions;
        std::vector<double> sector_boresights; // radians, one per sector
        std::vector<Vec2> wrap_vectors;        // identity first, then the mirror shifts
        double outer_radius = 0.0;             // R = d_ISD / sqrt(3)
        double inner_radius = 0.0;             // R_c = d_ISD / 2
        double sector_density = 0.0;           // lambda_a, sectors per m^2

        std::size_t n_sectors() const { return n_sites * sectors_per_site; }
        std::size_t site_of(std::size_t sector) const { return sector / sectors_per_site; }
        std::size_t sector_in_site(std::size_t sector) const { return sector % sectors_per_site; }
        double sector_area() const { return 1.0 / sector_density; }

        /// Shortest displacement from `from` to `to` over all wraparound images.
        Vec2 wrap_delta(const Vec2 &from, const Vec2 &to) const;
        double wrap_distance(const Vec2 &a, const Vec2 &b) const { return wrap_delta(a, b).norm(); }

        /// Maps a point to its image inside the cluster footprint.
        Vec2 wrap_into_cluster(const Vec2 &p) const;

        /// Closest site under wraparound.
        std::size_t closest_site(const Vec2 &p) const;

        /// Sector whose 120-degree wedge of the closest site contains p.
        std::size_t geometric_sector(const Vec2 &p) const;

        /// True if p lies in the hexagonal cell of a site centred at the origin.
        bool in_site_hexagon(const Vec2 &local) const;
    };

    /// Builds the layout. n_sites must be 1, 7 or 19 (0, 1 or 2 rings).
    NetworkLayout build_layout(double inter_site_distance, std::size_t n_sites);

    enum class DeploymentKind
    {
        sbh_random,
        sbh_adhoc,
        direct_access,
    };

    std::string_view to_string(DeploymentKind kind);
    DeploymentKind deployment_kind_from_string(std::string_view s);

    struct DeploymentSpec
    {
        DeploymentKind kind = DeploymentKind::sbh_random;
        double mean_ues_per_sector = 16.0;
        double mean_scs_per_sector = 16.0;
        double adhoc_distance = 0.0; // 2-D SC-UE distance d
        double min_bs_sc_distance = 35.0;
        double bs_height = 32.0;
        double sc_height = 5.0;
        double ue_height = 1.5;
    };

    /// One realisation of node positions. Immutable once built.
    struct Deployment
    {
        DeploymentKind kind = DeploymentKind::sbh_random;
        std::vector<Point3> sc_positions;
        std::vector<Point3> ue_positions;
        std::vector<std::size_t> sc_sector; // geometric sector of each SC
        std::vector<std::size_t> ue_sector; // geometric sector of each UE
        std::vector<std::size_t> adhoc_ue;  // ad-hoc only: UE each SC was placed for
        double adhoc_distance = 0.0;
        double mean_ues_per_sector = 0.0;
        double mean_scs_per_sector = 0.0;
        double min_bs_sc_distance = 0.0;

        std::size_t n_sc() const { return sc_positions.size(); }
        std::size_t n_ue() const { return ue_positions.size(); }
    };

    /// Drops UEs (Poisson per sector, uniform over the footprint) and then SCs
    /// according to the deployment kind. UEs are drawn first from `rng`, so two
    /// specs that differ only in their SC parameters see identical UEs.
    Deployment drop_nodes(const NetworkLayout &layout, const DeploymentSpec &spec, Engine &rng);

    /// Result of max-RSRP attachment.
    struct Association
    {
        std::vector<std::size_t> sc_server;               // SC -> sector (self-backhaul)
        std::vector<std::size_t> ue_server;               // UE -> SC (self-backhaul) or sector (direct)
        std::vector<std::vector<std::size_t>> sector_scs; // L_i: every SC attached to sector i
        std::vector<std::vector<std::size_t>> sector_ues; // K_i: direct-access UEs of sector i
        std::vector<std::vector<std::size_t>> sc_ues;     // K_l sets
        std::vector<char> sc_active;                      // K_l >= 1

        std::size_t active_count() const;
        /// Active SCs attached to `sector`, in ascending SC order.
        std::vector<std::size_t> active_scs_of(std::size_t sector) const;
    };

    /// Row-wise argmax; ties go to the lowest column. Rows are receivers,
    /// columns servers, entries RSRP in dBm.
    std::vector<std::size_t> attach_to_strongest(const Eigen::MatrixXd &rsrp_dbm);

    /// Self-backhaul attachment: UEs to SCs, SCs to sectors.
    Association associate_self_backhaul(const Eigen::MatrixXd &ue_sc_rsrp_dbm, const Eigen::MatrixXd &sc_bs_rsrp_dbm);

    /// Direct-access attachment: UEs to sectors.
    Association associate_direct(const Eigen::MatrixXd &ue_bs_rsrp_dbm);

} // namespace sbh
