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
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sbh/rng.hpp"
#include "sbh/units.hpp"

namespace sbh
{
    using cd = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    enum class LinkType
    {
        bs_ue,
        bs_sc,
        sc_ue,
    };

    std::string_view to_string(LinkType t);

    /// Distance-dependent LoS probability curve. Distances in metres.
    struct LosModel
    {
        enum class Form
        {
            macro,    // min(a/R, 1)(1 - exp(-R/b)) + exp(-R/b), R in km
            relay_ue, // 0.5 - min(0.5, 5 exp(-a/R)) + min(0.5, 5 exp(-R/b)), R in km
            exponential, // exp(-(d/D)^2), D in metres
        };
        Form form = Form::macro;
        double a = 0.018;
        double b = 0.063;
        double scale = 1.0; // D for the exponential form

        static LosModel macro(double a_km, double b_km) { return {Form::macro, a_km, b_km, 1.0}; }
        static LosModel relay_ue(double a_km, double b_km) { return {Form::relay_ue, a_km, b_km, 1.0}; }
        static LosModel exponential(double d) { return {Form::exponential, 0.0, 0.0, d}; }

        double operator()(double d_2d) const;
    };

    /// Pathloss and LoS description of one link type. Pathloss follows
    /// PL(d) = I + 10 eta log10(d / 1 km), so with d in metres the linear gain is
    /// A d^-eta with A = 10^(-(I - 30 eta)/10).
    struct LinkProfile
    {
        LinkType type = LinkType::bs_ue;
        double eta_los = 2.0;
        double eta_nlos = 3.0;
        double intercept_los_db = 0.0;  // I at 1 km, LoS
        double intercept_nlos_db = 0.0; // I at 1 km, NLoS
        double shadow_sigma_los_db = 0.0;
        double shadow_sigma_nlos_db = 0.0;
        double shadow_correlation = 0.0; // across servers seen by one receiver
        LosModel los_model;
        unsigned site_planning_trials = 1;  // LoS prob becomes 1 - (1 - p)^N
        double site_planning_nlos_bonus_db = 0.0;

        double linear_intercept(bool los) const;
        double eta(bool los) const { return los ? eta_los : eta_nlos; }
        double shadow_sigma_db(bool los) const { return los ? shadow_sigma_los_db : shadow_sigma_nlos_db; }
    };

    LinkProfile default_bs_ue_profile();
    LinkProfile default_bs_sc_profile();
    LinkProfile default_sc_ue_profile();

    /// LoS probability at 2-D distance d_2d, site planning applied. Throws on d_2d < 0.
    double los_probability(const LinkProfile &profile, double d_2d);

    /// Pathloss in dB (positive loss) at 3-D distance. Throws on d_3d <= 0.
    double pathloss_db(const LinkProfile &profile, bool is_los, double d_3d);

    /// n shadowing values in dB with pairwise correlation rho.
    std::vector<double> shadowing_db(Engine &rng, double sigma_db, std::size_t n, double rho);

    enum class AntennaKind
    {
        sector_3d,
        patch,
        yagi,
        omni,
    };

    struct AntennaPattern
    {
        AntennaKind kind = AntennaKind::omni;
        double horizontal_beamwidth_deg = 360.0; // theta_HP
        double vertical_beamwidth_deg = 360.0;   // zeta_HP
        double max_gain_dbi = 0.0;
        double downtilt_deg = 0.0;
        double front_back_v_db = 0.0; // F_v
        double front_back_h_db = 0.0; // F_h; also the floor of the downward patterns

        static AntennaPattern sector(double hbw, double vbw, double gain, double tilt, double fv, double fh);
        static AntennaPattern downward(AntennaKind kind, double hbw, double vbw, double gain, double floor_db);
        static AntennaPattern omni(double gain);
    };

    AntennaPattern default_bs_antenna();
    AntennaPattern default_patch_antenna();
    AntennaPattern default_yagi_antenna();

    /// G_V in dB at 3-D distance r for height difference delta. Throws on r <= delta.
    double vertical_gain_db(const AntennaPattern &p, double r, double delta);

    /// G_H in dB for angle theta (radians) from the boresight of sector 1,
    /// evaluated for sector s (1-based) whose boresight is (s-1) 2 pi / 3.
    double horizontal_gain_db(const AntennaPattern &p, double theta, int s = 1);

    /// G_a + G_V(r) + G_H,s(theta).
    double sector_antenna_gain_db(const AntennaPattern &p, double theta, double r, double delta, int s = 1);

    /// Gain of a downward-pointing SC access antenna towards a point seen at
    /// `elevation` below the horizon and azimuth `phi` relative to the
    /// antenna's reference direction.
    double downward_gain_db(const AntennaPattern &p, double elevation, double phi);

    struct LargeScaleGain
    {
        bool is_los = false;
        double pathloss_db = 0.0;
        double shadowing_db = 0.0;
        double tx_antenna_db = 0.0;
        double rx_antenna_db = 0.0;

        double total_db() const { return -pathloss_db + shadowing_db + tx_antenna_db + rx_antenna_db; }
        double linear() const { return db_to_linear(total_db()); }
    };

    /// Rician K in dB for 3-D link distance r in metres.
    inline double rician_k_db(double r) { return 13.0 - 0.03 * r; }

    /// Jakes correlation of a ULA, R_mn = J0(2 pi s |m - n|), plus its
    /// symmetric square root used to colour white Rayleigh vectors.
    class ArrayCorrelation
    {
    public:
        ArrayCorrelation(std::size_t antennas, double spacing_wavelengths);

        std::size_t antennas() const { return static_cast<std::size_t>(corr_.rows()); }
        double spacing() const { return spacing_; }
        const Eigen::MatrixXd &matrix() const { return corr_; }
        const Eigen::MatrixXd &sqrt_matrix() const { return sqrt_; }
        bool was_regularized() const { return regularized_; }

    private:
        double spacing_;
        Eigen::MatrixXd corr_;
        Eigen::MatrixXd sqrt_;
        bool regularized_ = false;
    };

    /// ULA steering vector exp(-j 2 pi s m sin(angle)), angle measured from broadside.
    CVector steering_vector(std::size_t antennas, double spacing_wavelengths, double angle);

    /// Unit-power Rician vector: sqrt(K/(K+1)) a(angle) + sqrt(1/(K+1)) R^1/2 z.
    CVector small_scale(Engine &rng, double k_db, const ArrayCorrelation &corr, double angle);

    /// Unit-power Rician scalar with LoS phase 1.
    cd small_scale_siso(Engine &rng, double k_db);

    /// sqrt(large-scale gain) times the small-scale realisation.
    CVector composite_channel(const LargeScaleGain &ls, const CVector &small);
    cd composite_channel(const LargeScaleGain &ls, cd small);

} // namespace sbh
