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

#include "sbh/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sbh
{
    std::string_view to_string(LinkType t)
    {
        switch (t)
        {
        case LinkType::bs_ue:
            return "bs_ue";
        case LinkType::bs_sc:
            return "bs_sc";
        case LinkType::sc_ue:
            return "sc_ue";
        }
        return "unknown";
    }

    double LosModel::operator()(double d_2d) const
    {
        switch (form)
        {
        case Form::macro:
        {
            const double R = d_2d / 1000.0;
            if (R <= 0.0)
                return 1.0;
            const double e = std::exp(-R / b);
            return std::min(a / R, 1.0) * (1.0 - e) + e;
        }
        case Form::relay_ue:
        {
            const double R = d_2d / 1000.0;
            if (R <= 0.0)
                return 1.0;
            return 0.5 - std::min(0.5, 5.0 * std::exp(-a / R)) + std::min(0.5, 5.0 * std::exp(-R / b));
        }
        case Form::exponential:
        {
            const double u = d_2d / scale;
            return std::exp(-u * u);
        }
        }
        return 0.0;
    }

    double LinkProfile::linear_intercept(bool los) const
    {
        double i = los ? intercept_los_db : intercept_nlos_db - site_planning_nlos_bonus_db;
        return db_to_linear(-(i - 30.0 * eta(los)));
    }

    LinkProfile default_bs_ue_profile()
    {
        LinkProfile p;
        p.type = LinkType::bs_ue;
        p.eta_los = 2.42;
        p.eta_nlos = 4.28;
        p.intercept_los_db = 103.4;
        p.intercept_nlos_db = 131.1;
        p.shadow_sigma_los_db = 8.0;
        p.shadow_sigma_nlos_db = 8.0;
        p.shadow_correlation = 0.0;
        p.los_model = LosModel::macro(0.018, 0.063);
        return p;
    }

    LinkProfile default_bs_sc_profile()
    {
        LinkProfile p;
        p.type = LinkType::bs_sc;
        p.eta_los = 2.35;
        p.eta_nlos = 3.63;
        p.intercept_los_db = 100.7;
        p.intercept_nlos_db = 125.2;
        p.shadow_sigma_los_db = 6.0;
        p.shadow_sigma_nlos_db = 6.0;
        p.shadow_correlation = 0.0;
        p.los_model = LosModel::macro(0.018, 0.072);
        p.site_planning_trials = 3;
        p.site_planning_nlos_bonus_db = 5.0;
        return p;
    }

    LinkProfile default_sc_ue_profile()
    {
        LinkProfile p;
        p.type = LinkType::sc_ue;
        p.eta_los = 2.09;
        p.eta_nlos = 3.75;
        p.intercept_los_db = 103.8;
        p.intercept_nlos_db = 145.4;
        p.shadow_sigma_los_db = 10.0;
        p.shadow_sigma_nlos_db = 10.0;
        p.shadow_correlation = 0.5;
        p.los_model = LosModel::relay_ue(0.156, 0.03);
        return p;
    }

    double los_probability(const LinkProfile &profile, double d_2d)
    {
        if (d_2d < 0.0)
            throw std::invalid_argument("negative distance");
        const double p = std::clamp(profile.los_model(d_2d), 0.0, 1.0);
        if (profile.site_planning_trials <= 1)
            return p;
        return 1.0 - std::pow(1.0 - p, static_cast<double>(profile.site_planning_trials));
    }

    double pathloss_db(const LinkProfile &profile, bool is_los, double d_3d)
    {
        if (!(d_3d > 0.0))
            throw std::invalid_argument("pathloss needs a positive distance");
        const double i = is_los ? profile.intercept_los_db
                                : profile.intercept_nlos_db - profile.site_planning_nlos_bonus_db;
        return i + 10.0 * profile.eta(is_los) * std::log10(d_3d / 1000.0);
    }

    std::vector<double> shadowing_db(Engine &rng, double sigma_db, std::size_t n, double rho)
    {
        if (rho < 0.0 || rho > 1.0)
            throw std::invalid_argument("shadowing correlation must be in [0, 1]");
        const double common = rng.normal();
        const double a = std::sqrt(rho);
        const double b = std::sqrt(1.0 - rho);
        std::vector<double> out(n);
        for (auto &v : out)
            v = sigma_db * (a * common + b * rng.normal());
        return out;
    }

    AntennaPattern AntennaPattern::sector(double hbw, double vbw, double gain, double tilt, double fv, double fh)
    {
        return {AntennaKind::sector_3d, hbw, vbw, gain, tilt, fv, fh};
    }

    AntennaPattern AntennaPattern::downward(AntennaKind kind, double hbw, double vbw, double gain, double floor_db)
    {
        return {kind, hbw, vbw, gain, 90.0, floor_db, floor_db};
    }

    AntennaPattern AntennaPattern::omni(double gain) { return {AntennaKind::omni, 360.0, 360.0, gain, 0.0, 0.0, 0.0}; }

    AntennaPattern default_bs_antenna() { return AntennaPattern::sector(70.0, 10.0, 14.0, 15.0, 20.0, 25.0); }
    AntennaPattern default_patch_antenna() { return AntennaPattern::downward(AntennaKind::patch, 80.0, 80.0, 5.0, 25.0); }
    AntennaPattern default_yagi_antenna() { return AntennaPattern::downward(AntennaKind::yagi, 58.0, 47.0, 10.0, 25.0); }

    double vertical_gain_db(const AntennaPattern &p, double r, double delta)
    {
        if (!(r > delta))
            throw std::invalid_argument("vertical pattern needs r > height difference");
        const double elev = rad_to_deg(std::atan(delta / std::sqrt(r * r - delta * delta)));
        const double u = (elev - p.downtilt_deg) / p.vertical_beamwidth_deg;
        return -std::min(12.0 * u * u, p.front_back_v_db);
    }

    double horizontal_gain_db(const AntennaPattern &p, double theta, int s)
    {
        const double off = wrap_angle(theta - (s - 1) * kTwoPi / 3.0);
        const double u = rad_to_deg(off) / p.horizontal_beamwidth_deg;
        return -std::min(12.0 * u * u, p.front_back_h_db);
    }

    double sector_antenna_gain_db(const AntennaPattern &p, double theta, double r, double delta, int s)
    {
        return p.max_gain_dbi + vertical_gain_db(p, r, delta) + horizontal_gain_db(p, theta, s);
    }

    double downward_gain_db(const AntennaPattern &p, double elevation, double phi)
    {
        if (p.kind == AntennaKind::omni)
            return p.max_gain_dbi;
        // Angle off the antenna axis, which points at the ground.
        const double off = 90.0 - rad_to_deg(elevation);
        const double c = std::cos(phi), s = std::sin(phi);
        const double h = p.horizontal_beamwidth_deg, v = p.vertical_beamwidth_deg;
        const double att = 12.0 * off * off * (c * c / (h * h) + s * s / (v * v));
        return p.max_gain_dbi - std::min(att, p.front_back_h_db);
    }

    ArrayCorrelation::ArrayCorrelation(std::size_t antennas, double spacing_wavelengths) : spacing_(spacing_wavelengths)
    {
        if (antennas == 0)
            throw std::invalid_argument("array needs at least one antenna");
        if (!(spacing_wavelengths > 0.0))
            throw std::invalid_argument("antenna spacing must be positive");
        const auto n = static_cast<Eigen::Index>(antennas);
        corr_.resize(n, n);
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index k = 0; k < n; ++k)
                corr_(m, k) = std::cyl_bessel_j(0.0, kTwoPi * spacing_wavelengths * static_cast<double>(std::abs(m - k)));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr_);
        Eigen::VectorXd lam = es.eigenvalues();
        if (lam.minCoeff() <= 0.0)
        {
            regularized_ = true;
            lam = lam.cwiseMax(0.0).array() + 1e-9;
        }
        sqrt_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        if (regularized_)
        {
            // Keep unit power per antenna after clipping.
            for (Eigen::Index m = 0; m < n; ++m)
                sqrt_.row(m) /= sqrt_.row(m).norm();
        }
    }

    CVector steering_vector(std::size_t antennas, double spacing_wavelengths, double angle)
    {
        CVector a(static_cast<Eigen::Index>(antennas));
        const cd step = std::polar(1.0, -kTwoPi * spacing_wavelengths * std::sin(angle));
        cd v{1.0, 0.0};
        for (Eigen::Index m = 0; m < a.size(); ++m)
        {
            a(m) = v;
            v *= step;
        }
        return a;
    }

    CVector small_scale(Engine &rng, double k_db, const ArrayCorrelation &corr, double angle)
    {
        const auto n = static_cast<Eigen::Index>(corr.antennas());
        CVector z(n);
        for (Eigen::Index m = 0; m < n; ++m)
            z(m) = rng.complex_normal();
        const double k = db_to_linear(k_db);
        const Eigen::VectorXd re = corr.sqrt_matrix() * z.real();
        const Eigen::VectorXd im = corr.sqrt_matrix() * z.imag();
        CVector h(n);
        h.real() = re;
        h.imag() = im;
        h *= std::sqrt(1.0 / (k + 1.0));
        h += std::sqrt(k / (k + 1.0)) * steering_vector(corr.antennas(), corr.spacing(), angle);
        return h;
    }

    cd small_scale_siso(Engine &rng, double k_db)
    {
        const double k = db_to_linear(k_db);
        return std::sqrt(k / (k + 1.0)) + std::sqrt(1.0 / (k + 1.0)) * rng.complex_normal();
    }

    CVector composite_channel(const LargeScaleGain &ls, const CVector &small) { return std::sqrt(ls.linear()) * small; }

    cd composite_channel(const LargeScaleGain &ls, cd small) { return std::sqrt(ls.linear()) * small; }

} // namespace sbh
