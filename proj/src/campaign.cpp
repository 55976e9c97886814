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

#include "sbh/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "sbh/analytic.hpp"

namespace sbh
{
    std::string_view to_string(RateMetric m)
    {
        switch (m)
        {
        case RateMetric::backhaul:
            return "backhaul";
        case RateMetric::access:
            return "access";
        case RateMetric::end_to_end:
            return "e2e";
        case RateMetric::direct_access:
            return "da";
        }
        return "unknown";
    }

    std::vector<RateMetric> metrics_for(Architecture a)
    {
        if (is_self_backhaul(a))
            return {RateMetric::backhaul, RateMetric::access, RateMetric::end_to_end};
        return {RateMetric::direct_access};
    }

    std::vector<DropResult> run_drops_serial(const DropEngine &engine, std::uint64_t first, std::size_t count)
    {
        std::vector<DropResult> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(engine.run(first + i));
        return out;
    }

    std::vector<DropResult> run_drops_parallel(const DropEngine &engine, std::uint64_t first, std::size_t count,
                                               int threads)
    {
        std::vector<DropResult> out(count);
        std::exception_ptr error;
        const int team = threads > 0 ? threads : omp_get_max_threads();
        const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
        for (long i = 0; i < n; ++i)
        {
            try
            {
                out[static_cast<std::size_t>(i)] = engine.run(first + static_cast<std::uint64_t>(i));
            }
            catch (...)
            {
#pragma omp critical(sbh_drop_error)
                if (!error)
                    error = std::current_exception();
            }
        }
        if (error)
            std::rethrow_exception(error);
        return out;
    }

    std::vector<std::vector<double>> CampaignResult::per_drop(RateMetric m, double alpha) const
    {
        std::vector<std::vector<double>> out;
        out.reserve(drops.size());
        for (const DropResult &d : drops)
        {
            std::vector<double> v;
            switch (m)
            {
            case RateMetric::backhaul:
                for (const ScRecord &s : d.scs)
                    if (s.active)
                        v.push_back(alpha * s.backhaul_capacity);
                break;
            case RateMetric::access:
                for (const UeRecord &u : d.ues)
                    v.push_back(u.access_rate(alpha));
                break;
            case RateMetric::end_to_end:
                for (const UeRecord &u : d.ues)
                    v.push_back(u.end_to_end(alpha));
                break;
            case RateMetric::direct_access:
                for (const UeRecord &u : d.ues)
                    v.push_back(u.da_rate);
                break;
            }
            out.push_back(std::move(v));
        }
        return out;
    }

    CdfSummary CampaignResult::summary(RateMetric m, double alpha) const
    {
        std::vector<double> pooled;
        for (const auto &v : per_drop(m, alpha))
            pooled.insert(pooled.end(), v.begin(), v.end());
        return CdfSummary(std::move(pooled));
    }

    std::size_t CampaignResult::total_resamples() const
    {
        std::size_t n = 0;
        for (const auto &d : drops)
            n += d.resamples;
        return n;
    }

    double CampaignResult::max_power_error() const
    {
        double e = 0.0;
        for (const auto &d : drops)
            e = std::max(e, d.max_power_error);
        return e;
    }

    CampaignResult run_campaign(const CampaignConfig &cfg)
    {
        const DropEngine engine(cfg);
        CampaignResult r;
        r.config = cfg;
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.threads == 1)
        {
            r.drops = run_drops_serial(engine, 0, cfg.n_drops);
            r.threads = 1;
        }
        else
        {
            r.drops = run_drops_parallel(engine, 0, cfg.n_drops, cfg.threads);
            r.threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

    namespace
    {
        Engine bootstrap_stream(const CampaignResult &r, RateMetric m, std::size_t slot)
        {
            return StreamFactory(r.config.master_seed)
                .stream(0, StreamTag::bootstrap, static_cast<std::uint64_t>(m), slot);
        }

        bool has_samples(const std::vector<std::vector<double>> &per_drop)
        {
            return std::any_of(per_drop.begin(), per_drop.end(), [](const auto &v) { return !v.empty(); });
        }
    } // namespace

    std::vector<PercentileRow> percentile_table(const CampaignResult &r, double alpha)
    {
        std::vector<PercentileRow> rows;
        for (RateMetric m : metrics_for(r.config.architecture))
        {
            const auto samples = r.per_drop(m, alpha);
            if (!has_samples(samples))
                continue;
            PercentileRow row;
            row.metric = m;
            row.alpha = alpha;
            const CdfSummary cdf = r.summary(m, alpha);
            row.count = cdf.count();
            row.mean = cdf.mean();
            const std::size_t b = r.config.bootstrap_resamples;
            Engine rng = bootstrap_stream(r, m, 0);
            row.p5 = bootstrap_percentile(samples, 5.0, b, rng);
            row.p50 = bootstrap_percentile(samples, 50.0, b, rng);
            row.p95 = bootstrap_percentile(samples, 95.0, b, rng);
            rows.push_back(row);
        }
        return rows;
    }

    LosStats los_stats(const CampaignResult &r)
    {
        LosStats s;
        std::size_t bh = 0, acc = 0, joint = 0, da = 0;
        for (const auto &d : r.drops)
        {
            for (const auto &sc : d.scs)
            {
                if (!sc.active)
                    continue;
                ++s.scs;
                bh += sc.backhaul_los;
            }
            for (const auto &u : d.ues)
            {
                ++s.ues;
                acc += u.access_los;
                joint += u.joint_los();
                da += u.da_los;
            }
        }
        const auto frac = [](std::size_t a, std::size_t n) { return n ? static_cast<double>(a) / static_cast<double>(n) : 0.0; };
        s.backhaul = frac(bh, s.scs);
        s.access = frac(acc, s.ues);
        s.joint = frac(joint, s.ues);
        s.direct_access = frac(da, s.ues);
        return s;
    }

    LoadStats load_stats(const CampaignResult &r)
    {
        LoadStats s;
        std::size_t attached = 0, active = 0, ues = 0;
        for (const auto &d : r.drops)
        {
            for (const auto &l : d.loads)
            {
                ++s.sectors;
                attached += l.attached_scs;
                active += l.active_scs;
                ues += l.ues;
            }
        }
        if (s.sectors > 0)
        {
            const auto n = static_cast<double>(s.sectors);
            s.attached_per_sector = static_cast<double>(attached) / n;
            s.active_per_sector = static_cast<double>(active) / n;
            s.ues_per_sector = static_cast<double>(ues) / n;
        }
        if (attached > 0)
            s.activation = static_cast<double>(active) / static_cast<double>(attached);
        if (active > 0)
            s.ues_per_active = static_cast<double>(ues) / static_cast<double>(active);

        const CampaignConfig &c = r.config;
        if (c.architecture == Architecture::sbh_adhoc)
        {
            // Every SC sits next to its own UE.
            s.analytic_activation = 1.0;
            s.analytic_ues_per_active = 1.0;
        }
        else if (c.architecture == Architecture::sbh_random)
        {
            s.analytic_activation = activation_probability(c.mean_ues_per_sector, c.mean_scs_per_sector);
            s.analytic_ues_per_active = mean_load(c.mean_ues_per_sector, c.mean_scs_per_sector).mean_per_active;
        }
        return s;
    }

    AlphaSweep alpha_sweep(const CampaignResult &r, std::span<const double> grid)
    {
        if (!is_self_backhaul(r.config.architecture))
            throw std::invalid_argument("alpha sweep needs a self-backhaul campaign");
        std::vector<double> alphas(grid.begin(), grid.end());
        std::sort(alphas.begin(), alphas.end());
        alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
        if (alphas.empty() || alphas.front() != 0.0 || alphas.back() != 1.0)
            throw std::invalid_argument("alpha grid must include 0 and 1");
        for (double a : alphas)
            if (a < 0.0 || a > 1.0)
                throw std::invalid_argument("alpha grid must lie in [0, 1]");

        AlphaSweep sweep;
        std::vector<double> p5, p50, p95, mean, tol5, tol50;
        for (std::size_t i = 0; i < alphas.size(); ++i)
        {
            const auto samples = r.per_drop(RateMetric::end_to_end, alphas[i]);
            if (!has_samples(samples))
                throw std::invalid_argument("alpha sweep: campaign has no observed UEs");
            AlphaSweepRow row;
            row.alpha = alphas[i];
            Engine rng = bootstrap_stream(r, RateMetric::end_to_end, i + 1);
            row.p5 = bootstrap_percentile(samples, 5.0, r.config.bootstrap_resamples, rng);
            row.p50 = bootstrap_percentile(samples, 50.0, r.config.bootstrap_resamples, rng);
            row.p95 = bootstrap_percentile(samples, 95.0, 0, rng);
            row.mean = r.summary(RateMetric::end_to_end, alphas[i]).mean();
            p5.push_back(row.p5.value);
            p50.push_back(row.p50.value);
            p95.push_back(row.p95.value);
            mean.push_back(row.mean);
            tol5.push_back(row.p5.half_width());
            tol50.push_back(row.p50.half_width());
            sweep.rows.push_back(row);
        }
        sweep.alpha_star_5 = alphas[argmax(p5)];
        sweep.alpha_star_50 = alphas[argmax(p50)];
        sweep.alpha_star_95 = alphas[argmax(p95)];
        sweep.alpha_star_mean = alphas[argmax(mean)];
        sweep.unimodal_5 = is_unimodal(p5, tol5);
        sweep.unimodal_50 = is_unimodal(p50, tol50);
        return sweep;
    }

    RateSeries ue_rate_series(const CampaignResult &r, double alpha, std::string label)
    {
        const RateMetric m =
            is_self_backhaul(r.config.architecture) ? RateMetric::end_to_end : RateMetric::direct_access;
        return {std::move(label), r.summary(m, alpha)};
    }

    double Comparison::ratio(std::size_t a, std::size_t b, std::size_t p) const
    {
        const double den = values.at(b).at(p);
        const double num = values.at(a).at(p);
        if (den == 0.0)
            return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return num / den;
    }

    Comparison compare_architectures(std::span<const RateSeries> series, std::span<const double> percentiles)
    {
        Comparison c;
        c.percentiles.assign(percentiles.begin(), percentiles.end());
        for (const RateSeries &s : series)
        {
            if (s.cdf.empty())
                throw std::invalid_argument("comparison series '" + s.label + "' has no samples");
            c.labels.push_back(s.label);
            std::vector<double> v;
            for (double p : percentiles)
                v.push_back(s.cdf.percentile(p));
            c.values.push_back(std::move(v));
        }
        return c;
    }

} // namespace sbh
