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

// Command-line front end: campaigns, alpha sweeps, architecture comparisons,
// analytic sweeps and antenna/pathloss calibration tables.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sbh/analytic.hpp"
#include "sbh/campaign.hpp"
#include "sbh/config.hpp"
#include "sbh/output.hpp"

using namespace sbh;

namespace
{
    struct Common
    {
        std::string config;
        std::optional<std::size_t> drops;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out;
        std::optional<int> threads;
        std::optional<std::string> architecture;
        std::optional<double> alpha;
    };

    void add_common(CLI::App *cmd, Common &c, bool with_arch = true)
    {
        cmd->add_option("--config", c.config, "Config file (TOML-style sections)");
        cmd->add_option("--drops", c.drops, "Number of drops");
        cmd->add_option("--seed", c.seed, "Master seed");
        cmd->add_option("--out", c.out, "Output directory");
        cmd->add_option("--threads", c.threads, "OpenMP threads (1 = serial)");
        if (with_arch)
        {
            cmd->add_option("--architecture", c.architecture, "sbh_random | sbh_adhoc | da_r1 | da_r3");
            cmd->add_option("--alpha", c.alpha, "Backhaul time fraction");
        }
    }

    CampaignConfig resolve(const Common &c)
    {
        CampaignConfig cfg = c.config.empty() ? CampaignConfig{} : load_config(c.config);
        if (c.drops)
            cfg.n_drops = *c.drops;
        if (c.seed)
            cfg.master_seed = *c.seed;
        if (c.out)
            cfg.output_dir = *c.out;
        if (c.threads)
            cfg.threads = *c.threads;
        if (c.architecture)
            cfg.architecture = architecture_from_string(*c.architecture);
        if (c.alpha)
            cfg.alpha = *c.alpha;
        cfg.validate();
        return cfg;
    }

    void report(const std::vector<fs::path> &files)
    {
        for (const auto &f : files)
            std::cout << "  wrote " << f.string() << '\n';
    }

    int cmd_campaign(const Common &c, std::optional<std::uint64_t> snapshot)
    {
        const CampaignConfig cfg = resolve(c);
        std::cout << "campaign " << to_string(cfg.architecture) << ", " << cfg.n_drops << " drops, seed "
                  << cfg.master_seed << '\n';
        const CampaignResult r = run_campaign(cfg);
        std::cout << "  " << r.seconds << " s on " << r.threads << " thread(s), " << r.total_resamples()
                  << " resample(s)\n";
        report(write_campaign_outputs(cfg.output_dir, r));
        if (snapshot)
        {
            const DropEngine engine(cfg);
            const fs::path p = fs::path(cfg.output_dir) / ("drop_" + std::to_string(*snapshot) + ".json");
            write_snapshot_json(p, engine.layout(), engine.snapshot(*snapshot));
            report({p});
        }
        for (const auto &row : percentile_table(r, cfg.alpha))
            std::printf("  %-8s p5 %10.4g  p50 %10.4g  p95 %10.4g bps\n", std::string(to_string(row.metric)).c_str(),
                        row.p5.value, row.p50.value, row.p95.value);
        return 0;
    }

    int cmd_sweep_alpha(const Common &c)
    {
        const CampaignConfig cfg = resolve(c);
        if (!is_self_backhaul(cfg.architecture))
            throw std::invalid_argument("sweep-alpha needs a self-backhaul architecture");
        const CampaignResult r = run_campaign(cfg);
        const AlphaSweep sweep = alpha_sweep(r, cfg.alpha_grid);
        const fs::path p = fs::path(cfg.output_dir) / "alpha_sweep.csv";
        write_alpha_sweep_csv(p, sweep);
        report(write_campaign_outputs(cfg.output_dir, r));
        report({p});
        std::printf("  alpha* p5 %.2f  p50 %.2f  p95 %.2f  mean %.2f\n", sweep.alpha_star_5, sweep.alpha_star_50,
                    sweep.alpha_star_95, sweep.alpha_star_mean);
        return 0;
    }

    int cmd_compare(const Common &c)
    {
        CampaignConfig base = resolve(c);
        if (!is_self_backhaul(base.architecture))
            base.architecture = Architecture::sbh_adhoc;
        std::cout << "compare " << to_string(base.architecture) << " vs da_r1 vs da_r3, " << base.n_drops
                  << " drops each\n";
        const CampaignResult sbh = run_campaign(base);
        const AlphaSweep sweep = alpha_sweep(sbh, base.alpha_grid);

        CampaignConfig r1 = base, r3 = base;
        r1.architecture = Architecture::da_r1;
        r3.architecture = Architecture::da_r3;
        const CampaignResult da1 = run_campaign(r1);
        const CampaignResult da3 = run_campaign(r3);

        const std::vector<RateSeries> series = {
            ue_rate_series(sbh, sweep.alpha_star_5, "sbh_alpha_star"),
            ue_rate_series(sbh, base.alpha, "sbh_alpha_fixed"),
            ue_rate_series(da1, 0.0, "da_r1"),
            ue_rate_series(da3, 0.0, "da_r3"),
        };
        std::vector<double> pct;
        for (int p = 5; p <= 95; p += 5)
            pct.push_back(p);
        const Comparison cmp = compare_architectures(series, pct);

        const fs::path dir = base.output_dir;
        write_comparison_csv(dir / "comparison.csv", cmp);
        write_alpha_sweep_csv(dir / "alpha_sweep.csv", sweep);
        report(write_campaign_outputs(dir / to_string(base.architecture), sbh));
        report(write_campaign_outputs(dir / "da_r1", da1));
        report(write_campaign_outputs(dir / "da_r3", da3));
        report({dir / "comparison.csv", dir / "alpha_sweep.csv"});
        std::printf("  alpha*(p5) %.2f: p5 ratio vs da_r1 %.3g, vs da_r3 %.3g\n", sweep.alpha_star_5,
                    cmp.ratio(0, 2, 0), cmp.ratio(0, 3, 0));
        return 0;
    }

    int cmd_analytic(const Common &c)
    {
        const CampaignConfig cfg = resolve(c);
        const auto t0 = std::chrono::steady_clock::now();
        const AnalyticSweep sweep = analytic_sweep(cfg.analytic_params(), cfg.density_multipliers, cfg.quadrature);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const fs::path dir = cfg.output_dir;
        write_analytic_sweep_csv(dir / "analytic_sweep.csv", sweep);
        write_manifest(dir / "run_manifest.json", cfg, secs, cfg.threads, {{"command", "analytic-sweep"}});
        report({dir / "analytic_sweep.csv", dir / "analytic_sweep_reference.csv", dir / "run_manifest.json"});
        std::printf("  ad-hoc reference: backhaul %.4g bps, access %.4g bps (D = %.1f m)\n",
                    sweep.adhoc_reference.avg_backhaul_bps, sweep.adhoc_reference.avg_access_bps, sweep.los_scale);
        return 0;
    }

    int cmd_calibrate(const Common &c)
    {
        const CampaignConfig cfg = resolve(c);
        const fs::path dir = cfg.output_dir;
        fs::create_directories(dir);
        const double delta_a = cfg.bs_height - cfg.sc_height;
        const double delta_b = cfg.sc_height - cfg.ue_height;

        {
            std::ofstream out(dir / "bs_vertical_gain.csv");
            out << "r3d_m,elevation_deg,gain_db\n";
            for (double r = std::ceil(delta_a + 0.5); r <= 1000.0; r += 1.0)
                out << csv_number(r) << ',' << csv_number(rad_to_deg(std::asin(delta_a / r))) << ','
                    << csv_number(vertical_gain_db(cfg.bs_antenna, r, delta_a)) << '\n';
        }
        {
            std::ofstream out(dir / "bs_horizontal_gain.csv");
            out << "theta_deg,sector1_db,sector2_db,sector3_db\n";
            for (int d = -180; d < 180; ++d)
            {
                const double t = deg_to_rad(d);
                out << d;
                for (int s = 1; s <= 3; ++s)
                    out << ',' << csv_number(horizontal_gain_db(cfg.bs_antenna, t, s));
                out << '\n';
            }
        }
        {
            std::ofstream out(dir / "sc_access_gain.csv");
            out << "d2d_m,elevation_deg,patch_h_db,patch_v_db,yagi_h_db,yagi_v_db\n";
            for (double d = 0.0; d <= 300.0; d += 1.0)
            {
                const double el = std::atan2(delta_b, d);
                out << csv_number(d) << ',' << csv_number(rad_to_deg(el)) << ','
                    << csv_number(downward_gain_db(cfg.patch, el, 0.0)) << ','
                    << csv_number(downward_gain_db(cfg.patch, el, kPi / 2)) << ','
                    << csv_number(downward_gain_db(cfg.yagi, el, 0.0)) << ','
                    << csv_number(downward_gain_db(cfg.yagi, el, kPi / 2)) << '\n';
            }
        }
        {
            std::ofstream out(dir / "pathloss.csv");
            out << "link,d2d_m,los_probability,pathloss_los_db,pathloss_nlos_db\n";
            const std::pair<const char *, const LinkProfile *> links[] = {
                {"bs_ue", &cfg.bs_ue}, {"bs_sc", &cfg.bs_sc}, {"sc_ue", &cfg.sc_ue}};
            for (const auto &[name, prof] : links)
            {
                const double dh = prof == &cfg.sc_ue ? delta_b : cfg.bs_height - (prof == &cfg.bs_sc ? cfg.sc_height : cfg.ue_height);
                for (double d = 1.0; d <= 1000.0; d += 1.0)
                {
                    const double d3 = std::hypot(d, dh);
                    out << name << ',' << csv_number(d) << ',' << csv_number(los_probability(*prof, d)) << ','
                        << csv_number(pathloss_db(*prof, true, d3)) << ',' << csv_number(pathloss_db(*prof, false, d3))
                        << '\n';
                }
            }
        }
        report({dir / "bs_vertical_gain.csv", dir / "bs_horizontal_gain.csv", dir / "sc_access_gain.csv",
                dir / "pathloss.csv"});
        return 0;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"sbhsim: massive-MIMO self-backhaul vs direct-access simulator"};
    app.require_subcommand(1);

    Common campaign, sweep, compare, analytic, calib;
    std::optional<std::uint64_t> snapshot;

    auto *c1 = app.add_subcommand("campaign", "Run a Monte Carlo campaign and write CDFs and statistics");
    add_common(c1, campaign);
    c1->add_option("--snapshot", snapshot, "Also write positions/attachments of this drop as JSON");
    auto *c2 = app.add_subcommand("sweep-alpha", "End-to-end percentiles over the alpha grid");
    add_common(c2, sweep);
    auto *c3 = app.add_subcommand("compare", "Self-backhaul (alpha* and fixed alpha) vs direct access r1/r3");
    add_common(c3, compare);
    auto *c4 = app.add_subcommand("analytic-sweep", "Analytic average rates versus SC density");
    add_common(c4, analytic, false);
    auto *c5 = app.add_subcommand("calibrate-antenna", "Antenna gain and pathloss tables");
    add_common(c5, calib, false);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (c1->parsed())
            return cmd_campaign(campaign, snapshot);
        if (c2->parsed())
            return cmd_sweep_alpha(sweep);
        if (c3->parsed())
            return cmd_compare(compare);
        if (c4->parsed())
            return cmd_analytic(analytic);
        if (c5->parsed())
            return cmd_calibrate(calib);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
