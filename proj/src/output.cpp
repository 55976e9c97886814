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

#include "sbh/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifndef SBH_GIT_REVISION
#define SBH_GIT_REVISION "unknown"
#endif

namespace sbh
{
    const char *git_revision() { return SBH_GIT_REVISION; }

    std::string csv_number(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

    namespace
    {
        std::ofstream open_out(const fs::path &path)
        {
            if (path.has_parent_path())
                fs::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            return out;
        }

        void put_estimate(std::ostream &out, const BootstrapEstimate &e)
        {
            out << ',' << csv_number(e.value) << ',' << csv_number(e.lower) << ',' << csv_number(e.upper);
        }
    } // namespace

    void write_cdf_csv(const fs::path &path, const CdfSummary &cdf)
    {
        auto out = open_out(path);
        out << "rate_bps,cdf\n";
        const auto &s = cdf.sorted();
        const auto n = static_cast<double>(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            // One row per distinct value, at the top of its step.
            if (i + 1 < s.size() && s[i + 1] == s[i])
                continue;
            out << csv_number(s[i]) << ',' << csv_number(static_cast<double>(i + 1) / n) << '\n';
        }
    }

    void write_percentiles_csv(const fs::path &path, const std::vector<PercentileRow> &rows)
    {
        auto out = open_out(path);
        out << "metric,alpha,count,mean_bps,p5_bps,p5_lo,p5_hi,p50_bps,p50_lo,p50_hi,p95_bps,p95_lo,p95_hi\n";
        for (const auto &r : rows)
        {
            out << to_string(r.metric) << ',' << csv_number(r.alpha) << ',' << r.count << ',' << csv_number(r.mean);
            put_estimate(out, r.p5);
            put_estimate(out, r.p50);
            put_estimate(out, r.p95);
            out << '\n';
        }
    }

    void write_los_csv(const fs::path &path, const LosStats &s)
    {
        auto out = open_out(path);
        out << "quantity,probability,samples\n";
        out << "backhaul_los," << csv_number(s.backhaul) << ',' << s.scs << '\n';
        out << "access_los," << csv_number(s.access) << ',' << s.ues << '\n';
        out << "joint_los," << csv_number(s.joint) << ',' << s.ues << '\n';
        out << "direct_access_los," << csv_number(s.direct_access) << ',' << s.ues << '\n';
    }

    void write_load_csv(const fs::path &path, const LoadStats &s)
    {
        auto out = open_out(path);
        out << "quantity,simulated,analytic\n";
        out << "sectors," << s.sectors << ",\n";
        out << "scs_per_sector," << csv_number(s.attached_per_sector) << ",\n";
        out << "active_scs_per_sector," << csv_number(s.active_per_sector) << ','
            << csv_number(s.analytic_activation * s.attached_per_sector) << '\n';
        out << "activation_probability," << csv_number(s.activation) << ',' << csv_number(s.analytic_activation)
            << '\n';
        out << "ues_per_active_sc," << csv_number(s.ues_per_active) << ',' << csv_number(s.analytic_ues_per_active)
            << '\n';
        out << "ues_per_sector," << csv_number(s.ues_per_sector) << ",\n";
    }

    void write_alpha_sweep_csv(const fs::path &path, const AlphaSweep &sweep)
    {
        auto out = open_out(path);
        out << "alpha,mean_bps,p5_bps,p5_lo,p5_hi,p50_bps,p50_lo,p50_hi,p95_bps\n";
        for (const auto &r : sweep.rows)
        {
            out << csv_number(r.alpha) << ',' << csv_number(r.mean);
            put_estimate(out, r.p5);
            put_estimate(out, r.p50);
            out << ',' << csv_number(r.p95.value) << '\n';
        }
        out << "# alpha_star_p5=" << csv_number(sweep.alpha_star_5) << " alpha_star_p50="
            << csv_number(sweep.alpha_star_50) << " alpha_star_p95=" << csv_number(sweep.alpha_star_95)
            << " alpha_star_mean=" << csv_number(sweep.alpha_star_mean) << " unimodal_p5=" << sweep.unimodal_5
            << " unimodal_p50=" << sweep.unimodal_50 << '\n';
    }

    void write_analytic_sweep_csv(const fs::path &path, const AnalyticSweep &sweep)
    {
        auto out = open_out(path);
        out << "density_multiplier,avg_backhaul_bps,avg_access_bps,activation\n";
        for (const auto &r : sweep.rows)
            out << csv_number(r.density_multiplier) << ',' << csv_number(r.avg_backhaul_bps) << ','
                << csv_number(r.avg_access_bps) << ',' << csv_number(r.activation) << '\n';

        fs::path ref = path;
        ref.replace_filename(path.stem().string() + "_reference.csv");
        auto o2 = open_out(ref);
        o2 << "deployment,avg_backhaul_bps,avg_access_bps,activation,los_scale_m\n";
        o2 << "adhoc," << csv_number(sweep.adhoc_reference.avg_backhaul_bps) << ','
           << csv_number(sweep.adhoc_reference.avg_access_bps) << ','
           << csv_number(sweep.adhoc_reference.activation) << ',' << csv_number(sweep.los_scale) << '\n';
    }

    void write_comparison_csv(const fs::path &path, const Comparison &c)
    {
        auto out = open_out(path);
        out << "percentile";
        for (const auto &l : c.labels)
            out << ',' << l << "_bps";
        for (std::size_t a = 1; a < c.labels.size(); ++a)
            out << ",ratio_" << c.labels[0] << "_over_" << c.labels[a];
        out << '\n';
        for (std::size_t p = 0; p < c.percentiles.size(); ++p)
        {
            out << csv_number(c.percentiles[p]);
            for (const auto &v : c.values)
                out << ',' << csv_number(v[p]);
            for (std::size_t a = 1; a < c.labels.size(); ++a)
                out << ',' << csv_number(c.ratio(0, a, p));
            out << '\n';
        }
    }

    void write_sinr_dump_csv(const fs::path &path, const CampaignResult &r)
    {
        auto out = open_out(path);
        out << "drop,link,index,sinr\n";
        for (const auto &d : r.drops)
        {
            for (std::size_t i = 0; i < d.backhaul_sinr.size(); ++i)
                out << d.drop << ",backhaul," << i << ',' << csv_number(d.backhaul_sinr[i]) << '\n';
            for (std::size_t i = 0; i < d.da_sinr.size(); ++i)
                out << d.drop << ",direct_access," << i << ',' << csv_number(d.da_sinr[i]) << '\n';
        }
    }

    void write_manifest(const fs::path &path, const CampaignConfig &cfg, double seconds, int threads,
                        const std::map<std::string, std::string> &extra)
    {
        nlohmann::ordered_json j;
        j["tool"] = "sbhsim";
        j["git_revision"] = git_revision();
        j["config_hash"] = config_hash(cfg);
        j["architecture"] = std::string(to_string(cfg.architecture));
        j["master_seed"] = cfg.master_seed;
        j["n_drops"] = cfg.n_drops;
        j["threads"] = threads;
        j["wall_seconds"] = seconds;
        for (const auto &[k, v] : extra)
            j[k] = v;
        j["config"] = to_config_string(cfg);
        auto out = open_out(path);
        out << j.dump(2) << '\n';
    }

    void write_snapshot_json(const fs::path &path, const NetworkLayout &layout, const DropSnapshot &snap)
    {
        nlohmann::ordered_json j;
        const Deployment &d = snap.deployment;
        j["deployment"] = std::string(to_string(d.kind));
        j["inter_site_distance"] = layout.inter_site_distance;
        auto sites = nlohmann::ordered_json::array();
        for (const Vec2 &p : layout.site_positions)
            sites.push_back({p.x, p.y});
        j["sites"] = sites;
        auto scs = nlohmann::ordered_json::array();
        for (std::size_t l = 0; l < d.n_sc(); ++l)
        {
            nlohmann::ordered_json s;
            s["x"] = d.sc_positions[l].xy.x;
            s["y"] = d.sc_positions[l].xy.y;
            s["z"] = d.sc_positions[l].height;
            if (l < snap.association.sc_server.size())
                s["sector"] = snap.association.sc_server[l];
            if (l < snap.association.sc_active.size())
                s["active"] = snap.association.sc_active[l] != 0;
            scs.push_back(s);
        }
        j["scs"] = scs;
        auto ues = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < d.n_ue(); ++k)
        {
            nlohmann::ordered_json u;
            u["x"] = d.ue_positions[k].xy.x;
            u["y"] = d.ue_positions[k].xy.y;
            u["z"] = d.ue_positions[k].height;
            u["geometric_sector"] = d.ue_sector[k];
            if (k < snap.association.ue_server.size())
                u["server"] = snap.association.ue_server[k];
            ues.push_back(u);
        }
        j["ues"] = ues;
        auto out = open_out(path);
        out << j.dump(1) << '\n';
    }

    std::vector<fs::path> write_campaign_outputs(const fs::path &dir, const CampaignResult &r)
    {
        std::vector<fs::path> files;
        const double alpha = r.config.alpha;
        for (RateMetric m : metrics_for(r.config.architecture))
        {
            const fs::path p = dir / ("cdf_" + std::string(to_string(m)) + ".csv");
            write_cdf_csv(p, r.summary(m, alpha));
            files.push_back(p);
        }
        files.push_back(dir / "percentiles.csv");
        write_percentiles_csv(files.back(), percentile_table(r, alpha));
        files.push_back(dir / "los_stats.csv");
        write_los_csv(files.back(), los_stats(r));
        files.push_back(dir / "load_stats.csv");
        write_load_csv(files.back(), load_stats(r));
        if (r.config.dump_sinr)
        {
            files.push_back(dir / "sinr_dump.csv");
            write_sinr_dump_csv(files.back(), r);
        }
        files.push_back(dir / "run_manifest.json");
        write_manifest(files.back(), r.config, r.seconds, r.threads,
                       {{"resamples", std::to_string(r.total_resamples())},
                        {"max_power_error", csv_number(r.max_power_error())}});
        return files;
    }

} // namespace sbh
