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
#include <span>
#include <vector>

#include "sbh/channel.hpp"
#include "sbh/quadrature.hpp"

namespace sbh
{
    /// Stochastic-geometry model of the self-backhaul network. Interference
    /// limited, no shadowing; the backhaul leg sees a hexagonal macro grid, the
    /// access leg a PPP of active SCs.
    struct AnalyticParams
    {
        enum class Kind
        {
            random,
            adhoc,
        };
        Kind kind = Kind::random;

        double inter_site_distance = 500.0;
        double mean_ues_per_sector = 16.0; // mu_u
        double mean_scs_per_sector = 16.0; // mu_b (ad-hoc: one SC per UE, so mu_u)
        std::size_t antennas = 64;
        double bs_power_w = 39.81;        // cancels in the SIR, kept for clarity
        double sc_power_w = 1.0;          // idem
        double sc_gain_db = 5.0;          // G_b, idem
        AntennaPattern bs_antenna = default_bs_antenna();
        double bs_sc_height_diff = 27.0;  // delta_a
        double sc_ue_height_diff = 3.5;   // delta_b
        LinkProfile bs_sc = default_bs_sc_profile();
        LinkProfile sc_ue = default_sc_ue_profile();
        double los_scale = 0.0;           // D; 0 means fit to sc_ue
        double min_bs_sc_distance = 35.0; // r_min
        double adhoc_distance = 0.0;      // d
        double alpha = 0.5;
        double bandwidth = 10e6;

        double outer_radius() const;   // R
        double inner_radius() const;   // R_c
        double boundary_radius() const; // R_b = 3 d_ISD / 2
        double sector_density() const; // lambda_a
        double ue_density() const;     // lambda_u
        double sc_density() const;     // lambda_b
        double activation() const;     // p_a (1 for ad-hoc)
        double active_sc_density() const; // lambda_b tilde
        double mean_active_per_sector() const; // mu_b tilde
        double users_per_sc() const;   // mu_l (1 for ad-hoc)

        void validate() const;
    };

    /// 1 - (1 + lambda_u / (3.5 lambda_b))^-3.5.
    double activation_probability(double lambda_u, double lambda_b);

    struct MeanLoad
    {
        double mu_l = 0.0;            // 1 + 1.28 lambda_u / lambda_b
        double mean_per_active = 0.0; // lambda_u / (p_a lambda_b)
    };
    MeanLoad mean_load(double lambda_u, double lambda_b);

    /// (1/2 pi) integral over [0, 2 pi) of sum_s G_H,s (linear).
    double mean_horizontal_gain(const AntennaPattern &p, const QuadratureSpec &quad);

    struct BackhaulSir
    {
        double value = 0.0;
        double prefactor = 0.0;
        double signal = 0.0;
        double co_site = 0.0;   // I_1
        double inter_site = 0.0; // I_2
    };

    /// SIR of a typical SC at 3-D distance r and angle theta from the boresight
    /// of its serving sector. `gbar` is mean_horizontal_gain(). Throws outside
    /// r in [r_min, R_c], theta in [-pi/3, pi/3].
    BackhaulSir backhaul_sir(double r, double theta, const AnalyticParams &p, double gbar);

    /// alpha BW E[log2(1 + SIR)] over uniform r and theta.
    QuadResult avg_backhaul_rate(const AnalyticParams &p, const QuadratureSpec &quad);

    /// exp(-(x/D)^2).
    double access_los_probability(double x, double d);

    /// x1 = (A_NL / A_L)^(1/eta_NL) x^(eta_L / eta_NL).
    double nlos_exclusion_radius(double x, const LinkProfile &profile);

    /// Least-squares D of exp(-(x/D)^2) against the profile's LoS curve on [0, max_distance].
    double fit_los_scale(const LinkProfile &profile, double max_distance = 300.0);

    /// Laplace transform of the aggregate access interference at s, for a
    /// serving distance x and active-SC density lambda.
    QuadResult laplace_aggregate_interference(double s, double x, double lambda, const AnalyticParams &p,
                                              const QuadratureSpec &quad);

    /// Pr[SIR > gamma] at serving distance x, Rayleigh fading, no noise.
    QuadResult rate_coverage(double gamma, double x, double lambda, const AnalyticParams &p,
                             const QuadratureSpec &quad);

    /// (1 - alpha) BW E[log2(1 + SIR)/mu_l], integrated in the rate variable.
    QuadResult avg_access_rate(const AnalyticParams &p, const QuadratureSpec &quad);

    struct AnalyticSweepRow
    {
        double density_multiplier = 0.0;
        double avg_backhaul_bps = 0.0;
        double avg_access_bps = 0.0;
        double activation = 0.0;
    };

    struct AnalyticSweep
    {
        std::vector<AnalyticSweepRow> rows;  // random deployment, lambda_b = m lambda_u
        AnalyticSweepRow adhoc_reference;    // one SC per UE
        double los_scale = 0.0;
    };

    /// Random deployment at each multiplier of the ad-hoc SC density, plus the
    /// ad-hoc reference. Grid points are independent and run in parallel.
    AnalyticSweep analytic_sweep(const AnalyticParams &base, std::span<const double> multipliers,
                                 const QuadratureSpec &quad);

} // namespace sbh
