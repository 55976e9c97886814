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

#include "sbh/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <exception>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace sbh
{
    double AnalyticParams::outer_radius() const { return inter_site_distance / std::sqrt(3.0); }
    double AnalyticParams::inner_radius() const { return inter_site_distance / 2.0; }
    double AnalyticParams::boundary_radius() const { return 1.5 * inter_site_distance; }

    double AnalyticParams::sector_density() const
    {
        const double R = outer_radius();
        return 3.0 / (1.5 * std::sqrt(3.0) * R * R);
    }

    double AnalyticParams::ue_density() const { return mean_ues_per_sector * sector_density(); }

    double AnalyticParams::sc_density() const
    {
        return (kind == Kind::adhoc ? mean_ues_per_sector : mean_scs_per_sector) * sector_density();
    }

    double AnalyticParams::activation() const
    {
        return kind == Kind::adhoc ? 1.0 : activation_probability(ue_density(), sc_density());
    }

    double AnalyticParams::active_sc_density() const { return activation() * sc_density(); }

    double AnalyticParams::mean_active_per_sector() const { return active_sc_density() / sector_density(); }

    double AnalyticParams::users_per_sc() const
    {
        return kind == Kind::adhoc ? 1.0 : mean_load(ue_density(), sc_density()).mu_l;
    }

    void AnalyticParams::validate() const
    {
        if (!(inter_site_distance > 0.0) || !(mean_ues_per_sector > 0.0) || !(mean_scs_per_sector > 0.0))
            throw std::invalid_argument("analytic model needs positive geometry and densities");
        if (!(min_bs_sc_distance > bs_sc_height_diff) || !(min_bs_sc_distance < inner_radius()))
            throw std::invalid_argument("r_min must lie between the height difference and R_c");
        if (!(static_cast<double>(antennas) > mean_active_per_sector()))
            throw std::invalid_argument("need more antennas than active SCs per sector");
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("alpha must be in [0, 1]");
    }

    double activation_probability(double lambda_u, double lambda_b)
    {
        if (!(lambda_u > 0.0) || !(lambda_b > 0.0))
            throw std::invalid_argument("densities must be positive");
        return 1.0 - std::pow(1.0 + lambda_u / (3.5 * lambda_b), -3.5);
    }

    MeanLoad mean_load(double lambda_u, double lambda_b)
    {
        const double pa = activation_probability(lambda_u, lambda_b);
        return {1.0 + 1.28 * lambda_u / lambda_b, lambda_u / (pa * lambda_b)};
    }

    double mean_horizontal_gain(const AntennaPattern &p, const QuadratureSpec &quad)
    {
        auto f = [&](double theta) {
            double g = 0.0;
            for (int s = 1; s <= 3; ++s)
                g += db_to_linear(horizontal_gain_db(p, theta, s));
            return g;
        };
        // Split at the sector boresights and the half-way points so every
        // piece is smooth apart from the front-back clamp.
        double total = 0.0;
        for (int k = 0; k < 6; ++k)
            total += integrate_or_throw(f, k * kPi / 3.0, (k + 1) * kPi / 3.0, quad, "mean horizontal gain").value;
        return total / kTwoPi;
    }

    BackhaulSir backhaul_sir(double r, double theta, const AnalyticParams &p, double gbar)
    {
        if (r < p.min_bs_sc_distance || r > p.inner_radius())
            throw std::domain_error("backhaul SIR: r outside [r_min, R_c]");
        if (std::abs(theta) > kPi / 3.0 + 1e-12)
            throw std::domain_error("backhaul SIR: theta outside [-pi/3, pi/3]");

        const double mu = p.mean_active_per_sector();
        const double M = static_cast<double>(p.antennas);
        const double Ga = db_to_linear(p.bs_antenna.max_gain_dbi);
        const double P = p.bs_power_w;
        const double gv = db_to_linear(vertical_gain_db(p.bs_antenna, r, p.bs_sc_height_diff));
        const double beta_l = p.bs_sc.linear_intercept(true) * std::pow(r, -p.bs_sc.eta_los);

        BackhaulSir out;
        out.prefactor = (M - mu + 1.0) / mu;
        out.signal = P * Ga * gv * db_to_linear(horizontal_gain_db(p.bs_antenna, theta, 1)) * beta_l;
        double gh_other = 0.0;
        for (int s = 2; s <= 3; ++s)
            gh_other += db_to_linear(horizontal_gain_db(p.bs_antenna, theta, s));
        out.co_site = P * Ga * gv * gh_other * beta_l;

        const double Rc = p.inner_radius(), Rb = p.boundary_radius();
        const double eta = p.bs_sc.eta_nlos;
        const double near = 2.0 * Rc - r;
        const double gv_ring = db_to_linear(vertical_gain_db(p.bs_antenna, near, p.bs_sc_height_diff));
        out.inter_site = kTwoPi * p.sector_density() * P * Ga * gv_ring * gbar * p.bs_sc.linear_intercept(false) /
                         (eta - 2.0) * (std::pow(near, 2.0 - eta) - std::pow(Rb - r, 2.0 - eta));

        out.value = out.prefactor * out.signal / (out.co_site + out.inter_site);
        return out;
    }

    namespace
    {
        // Integral over [a, b] split at the given interior points.
        QuadResult integrate_pieces(const std::function<double(double)> &f, double a, double b,
                                    std::vector<double> cuts, const QuadratureSpec &quad, const char *what)
        {
            cuts.push_back(a);
            cuts.push_back(b);
            std::sort(cuts.begin(), cuts.end());
            QuadResult out;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            {
                const double lo = std::max(cuts[i], a), hi = std::min(cuts[i + 1], b);
                if (!(hi > lo))
                    continue;
                const QuadResult q = integrate_or_throw(f, lo, hi, quad, what);
                out.value += q.value;
                out.error += q.error;
                out.evals += q.evals;
            }
            return out;
        }

        // Azimuths where a sector's horizontal pattern hits its clamp.
        std::vector<double> horizontal_kinks(const AntennaPattern &a)
        {
            const double off = deg_to_rad(std::sqrt(a.front_back_h_db / 12.0) * a.horizontal_beamwidth_deg);
            std::vector<double> out;
            for (int s = 1; s <= 3; ++s)
                for (double sign : {-1.0, 1.0})
                    out.push_back(wrap_angle((s - 1) * kTwoPi / 3.0 + sign * off));
            return out;
        }

        // 3D distances where the vertical pattern hits its clamp.
        std::vector<double> vertical_kinks(const AntennaPattern &a, double delta)
        {
            const double off = std::sqrt(a.front_back_v_db / 12.0) * a.vertical_beamwidth_deg;
            std::vector<double> out;
            for (double elev : {a.downtilt_deg - off, a.downtilt_deg + off})
                if (elev > 0.0 && elev < 90.0)
                    out.push_back(delta / std::sin(deg_to_rad(elev)));
            return out;
        }
    } // namespace

    QuadResult avg_backhaul_rate(const AnalyticParams &p, const QuadratureSpec &quad)
    {
        p.validate();
        const double gbar = mean_horizontal_gain(p.bs_antenna, quad);
        const double r0 = p.min_bs_sc_distance, r1 = p.inner_radius();
        // The SIR is only piecewise smooth: split where the patterns clamp,
        // both at the serving distance and at the ring distance 2 R_c - r.
        std::vector<double> r_cuts;
        for (double k : vertical_kinks(p.bs_antenna, p.bs_sc_height_diff))
        {
            r_cuts.push_back(k);
            r_cuts.push_back(2.0 * r1 - k);
        }
        const std::vector<double> t_cuts = horizontal_kinks(p.bs_antenna);
        std::size_t evals = 0;
        double inner_error = 0.0;
        auto over_r = [&](double theta) {
            auto f = [&](double r) { return std::log2(1.0 + backhaul_sir(r, theta, p, gbar).value); };
            const QuadResult q = integrate_pieces(f, r0, r1, r_cuts, quad, "backhaul rate (r)");
            evals += q.evals;
            inner_error = std::max(inner_error, q.error);
            return q.value;
        };
        QuadResult out = integrate_pieces(over_r, -kPi / 3.0, kPi / 3.0, t_cuts, quad, "backhaul rate (theta)");
        const double norm = p.alpha * p.bandwidth / ((r1 - r0) * (2.0 * kPi / 3.0));
        out.value *= norm;
        // The outer estimate does not see how inner errors vary with theta,
        // so never claim better than the requested relative tolerance.
        out.error = std::max((out.error + inner_error * 2.0 * kPi / 3.0) * norm, quad.rel_tol * std::abs(out.value));
        out.evals += evals;
        return out;
    }

    double access_los_probability(double x, double d)
    {
        if (x < 0.0 || !(d > 0.0))
            throw std::invalid_argument("LoS curve needs x >= 0 and D > 0");
        const double u = x / d;
        return std::exp(-u * u);
    }

    double nlos_exclusion_radius(double x, const LinkProfile &profile)
    {
        const double ratio = profile.linear_intercept(false) / profile.linear_intercept(true);
        return std::pow(ratio, 1.0 / profile.eta_nlos) * std::pow(x, profile.eta_los / profile.eta_nlos);
    }

    double fit_los_scale(const LinkProfile &profile, double max_distance)
    {
        auto cost = [&](double d) {
            double sum = 0.0;
            for (int i = 0; i <= 300; ++i)
            {
                const double x = max_distance * i / 300.0;
                const double e = access_los_probability(x, d) - los_probability(profile, x);
                sum += e * e;
            }
            return sum;
        };
        const auto r = boost::math::tools::brent_find_minima(cost, 1.0, 10.0 * max_distance, 40);
        return r.first;
    }

    namespace
    {
        double los_scale_of(const AnalyticParams &p)
        {
            return p.los_scale > 0.0 ? p.los_scale : fit_los_scale(p.sc_ue);
        }

        // c = s P_l G_b, so that s P_l G_b beta(u) = c A u^-eta.
        QuadResult laplace_exponent(double c, double x, double lambda, double d_los, const LinkProfile &prof,
                                    const QuadratureSpec &quad)
        {
            QuadResult out;
            if (c <= 0.0 || lambda <= 0.0)
                return out;
            const double a_l = prof.linear_intercept(true), a_n = prof.linear_intercept(false);
            const double eta_l = prof.eta_los, eta_n = prof.eta_nlos;

            auto los = [&](double u) {
                const double t = c * a_l * std::pow(u, -eta_l);
                return access_los_probability(u, d_los) * u * t / (1.0 + t);
            };
            auto los_tail = [&](double R) {
                const double v = R / d_los;
                return 0.5 * d_los * d_los * std::exp(-v * v);
            };
            auto nlos = [&](double u) {
                const double t = c * a_n * std::pow(u, -eta_n);
                return (1.0 - access_los_probability(u, d_los)) * u * t / (1.0 + t);
            };
            auto nlos_tail = [&](double R) { return c * a_n * std::pow(R, 2.0 - eta_n) / (eta_n - 2.0); };

            // Coverage is exp(-exponent): an absolute error e on the exponent
            // is a relative error e on coverage, so rel_tol is also an
            // absolute target here.
            QuadratureSpec q = quad;
            q.abs_tol = std::max(quad.abs_tol, quad.rel_tol / (kTwoPi * lambda));
            const double x1 = nlos_exclusion_radius(x, prof);
            const QuadResult ql = integrate_upper_tail(los, x, x + 4.0 * d_los, los_tail, q);
            QuadResult qn;
            try
            {
                qn = integrate_upper_tail(nlos, x1, std::max(4.0 * x1, x1 + 100.0), nlos_tail, q);
            }
            catch (const QuadratureError &e)
            {
                // The tail only adds to the exponent. Once the part already
                // integrated drives exp(-exponent) below the smallest double
                // the missing tail cannot matter.
                qn = e.partial();
                if (kTwoPi * lambda * (ql.value + qn.value) < 800.0)
                    throw;
                qn.truncation = std::numeric_limits<double>::infinity();
            }
            out.value = kTwoPi * lambda * (ql.value + qn.value);
            out.error = kTwoPi * lambda * (ql.error + qn.error);
            out.evals = ql.evals + qn.evals;
            out.truncation = std::max(ql.truncation, qn.truncation);
            return out;
        }
    } // namespace

    QuadResult laplace_aggregate_interference(double s, double x, double lambda, const AnalyticParams &p,
                                              const QuadratureSpec &quad)
    {
        if (s < 0.0)
            throw std::invalid_argument("Laplace variable must be non-negative");
        const double c = s * p.sc_power_w * db_to_linear(p.sc_gain_db);
        QuadResult e = laplace_exponent(c, x, lambda, los_scale_of(p), p.sc_ue, quad);
        QuadResult out = e;
        out.value = std::exp(-e.value);
        out.error = out.value * e.error;
        return out;
    }

    QuadResult rate_coverage(double gamma, double x, double lambda, const AnalyticParams &p,
                             const QuadratureSpec &quad)
    {
        if (gamma < 0.0)
            throw std::invalid_argument("SIR threshold must be non-negative");
        const double beta = p.sc_ue.linear_intercept(true) * std::pow(x, -p.sc_ue.eta_los);
        const double s = gamma / (p.sc_power_w * db_to_linear(p.sc_gain_db) * beta);
        return laplace_aggregate_interference(s, x, lambda, p, quad);
    }

    QuadResult avg_access_rate(const AnalyticParams &p, const QuadratureSpec &quad)
    {
        p.validate();
        const double mu = p.users_per_sc();
        const double lambda = p.active_sc_density();
        AnalyticParams fixed = p;
        fixed.los_scale = los_scale_of(p);
        const double delta = p.sc_ue_height_diff;
        std::size_t evals = 0;

        auto coverage = [&](double t, double x) {
            const double gamma = std::exp2(t * mu) - 1.0;
            const QuadResult q = rate_coverage(gamma, x, lambda, fixed, quad);
            evals += q.evals;
            return q.value;
        };
        // Integral over the rate variable t = log2(1 + gamma) / mu_l. Coverage
        // decays geometrically in t; the tail is estimated from that decay.
        auto rate_integral = [&](double x) {
            auto f = [&](double t) { return coverage(t, x); };
            auto tail = [&](double R) {
                const double pr = coverage(R, x);
                if (pr <= 0.0)
                    return 0.0;
                const double ph = coverage(0.5 * R, x);
                const double k = std::log(ph / pr) / (0.5 * R);
                return k > 1e-9 ? pr / k : std::numeric_limits<double>::infinity();
            };
            return integrate_upper_tail(f, 0.0, 8.0 / mu, tail, quad);
        };

        QuadResult out;
        if (p.kind == AnalyticParams::Kind::adhoc)
        {
            out = rate_integral(std::hypot(p.adhoc_distance, delta));
        }
        else
        {
            const double lb = p.sc_density();
            double at_delta = -1.0;
            auto f = [&](double x) {
                const double pdf = kTwoPi * lb * x * std::exp(-lb * kPi * (x * x - delta * delta));
                return pdf * rate_integral(x).value;
            };
            auto tail = [&](double R) {
                if (at_delta < 0.0)
                    at_delta = rate_integral(delta).value;
                return at_delta * std::exp(-lb * kPi * (R * R - delta * delta));
            };
            out = integrate_upper_tail(f, delta, delta + 3.0 / std::sqrt(lb * kPi), tail, quad);
        }
        const double scale = (1.0 - p.alpha) * p.bandwidth;
        out.value *= scale;
        out.error *= scale;
        out.evals += evals;
        return out;
    }

    AnalyticSweep analytic_sweep(const AnalyticParams &base, std::span<const double> multipliers,
                                 const QuadratureSpec &quad)
    {
        AnalyticSweep out;
        AnalyticParams ref = base;
        ref.kind = AnalyticParams::Kind::adhoc;
        ref.adhoc_distance = 0.0;
        ref.los_scale = base.los_scale > 0.0 ? base.los_scale : fit_los_scale(base.sc_ue);
        out.los_scale = ref.los_scale;
        out.adhoc_reference = {1.0, avg_backhaul_rate(ref, quad).value, avg_access_rate(ref, quad).value, 1.0};

        out.rows.resize(multipliers.size());
        const auto n = static_cast<long>(multipliers.size());
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i)
        {
            try
            {
                AnalyticParams q = ref;
                q.kind = AnalyticParams::Kind::random;
                q.mean_scs_per_sector = multipliers[static_cast<std::size_t>(i)] * base.mean_ues_per_sector;
                AnalyticSweepRow row;
                row.density_multiplier = multipliers[static_cast<std::size_t>(i)];
                row.activation = q.activation();
                row.avg_backhaul_bps = avg_backhaul_rate(q, quad).value;
                row.avg_access_bps = avg_access_rate(q, quad).value;
                out.rows[static_cast<std::size_t>(i)] = row;
            }
            catch (...)
            {
#pragma omp critical(sbh_analytic_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
        return out;
    }

} // namespace sbh
