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

#include "sbh/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace sbh
{
    std::string_view to_string(Architecture a)
    {
        switch (a)
        {
        case Architecture::sbh_random:
            return "sbh_random";
        case Architecture::sbh_adhoc:
            return "sbh_adhoc";
        case Architecture::da_r1:
            return "da_r1";
        case Architecture::da_r3:
            return "da_r3";
        }
        return "unknown";
    }

    Architecture architecture_from_string(std::string_view s)
    {
        for (auto a : {Architecture::sbh_random, Architecture::sbh_adhoc, Architecture::da_r1, Architecture::da_r3})
            if (s == to_string(a))
                return a;
        throw std::invalid_argument("unknown architecture: " + std::string(s));
    }

    bool is_self_backhaul(Architecture a) { return a == Architecture::sbh_random || a == Architecture::sbh_adhoc; }

    CampaignConfig::CampaignConfig()
    {
        for (int i = 0; i <= 20; ++i)
            alpha_grid.push_back(i / 20.0);
        density_multipliers = {0.25, 0.5, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000};
        quadrature.rel_tol = 1e-5;
        quadrature.abs_tol = 1e-12;
    }

    void CampaignConfig::validate() const
    {
        if (n_drops == 0)
            throw std::invalid_argument("n_drops must be at least 1");
        if (!(inter_site_distance > 0.0))
            throw std::invalid_argument("inter_site_distance must be positive");
        if (!(mean_ues_per_sector > 0.0) || !(mean_scs_per_sector > 0.0))
            throw std::invalid_argument("node densities must be positive");
        if (adhoc_distance < 0.0 || min_bs_sc_distance < 0.0)
            throw std::invalid_argument("distances must be non-negative");
        if (!(bs_height > sc_height) || !(sc_height > ue_height) || !(ue_height > 0.0))
            throw std::invalid_argument("heights must satisfy BS > SC > UE > 0");
        if (antennas == 0 || pilot_codebook == 0 || rb_samples == 0)
            throw std::invalid_argument("antenna, pilot and RB sample counts must be positive");
        if (!(antenna_spacing > 0.0))
            throw std::invalid_argument("antenna spacing must be positive");
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("alpha must be in [0, 1]");
        for (double a : alpha_grid)
            if (a < 0.0 || a > 1.0)
                throw std::invalid_argument("alpha grid must lie in [0, 1]");
        for (double m : density_multipliers)
            if (!(m > 0.0))
                throw std::invalid_argument("density multipliers must be positive");
        if (sc_access_antenna != AntennaKind::patch && sc_access_antenna != AntennaKind::yagi &&
            sc_access_antenna != AntennaKind::omni)
            throw std::invalid_argument("SC access antenna must be patch, yagi or omni");
        frame.validate();
        quadrature.validate();
        (void)build_layout(inter_site_distance, n_sites);
    }

    DeploymentKind CampaignConfig::deployment_kind() const
    {
        switch (architecture)
        {
        case Architecture::sbh_random:
            return DeploymentKind::sbh_random;
        case Architecture::sbh_adhoc:
            return DeploymentKind::sbh_adhoc;
        default:
            return DeploymentKind::direct_access;
        }
    }

    DeploymentSpec CampaignConfig::deployment_spec() const
    {
        DeploymentSpec s;
        s.kind = deployment_kind();
        s.mean_ues_per_sector = mean_ues_per_sector;
        s.mean_scs_per_sector = mean_scs_per_sector;
        s.adhoc_distance = adhoc_distance;
        s.min_bs_sc_distance = min_bs_sc_distance;
        s.bs_height = bs_height;
        s.sc_height = sc_height;
        s.ue_height = ue_height;
        return s;
    }

    const AntennaPattern &CampaignConfig::sc_access_pattern() const
    {
        static const AntennaPattern omni = AntennaPattern::omni(5.0);
        switch (sc_access_antenna)
        {
        case AntennaKind::patch:
            return patch;
        case AntennaKind::yagi:
            return yagi;
        default:
            return omni;
        }
    }

    AnalyticParams CampaignConfig::analytic_params() const
    {
        AnalyticParams p;
        p.kind = architecture == Architecture::sbh_adhoc ? AnalyticParams::Kind::adhoc : AnalyticParams::Kind::random;
        p.inter_site_distance = inter_site_distance;
        p.mean_ues_per_sector = mean_ues_per_sector;
        p.mean_scs_per_sector = mean_scs_per_sector;
        p.antennas = antennas;
        p.bs_power_w = dbm_to_watt(bs_power_dbm);
        p.sc_power_w = dbm_to_watt(sc_power_dbm);
        p.sc_gain_db = sc_access_pattern().max_gain_dbi;
        p.bs_antenna = bs_antenna;
        p.bs_sc_height_diff = bs_height - sc_height;
        p.sc_ue_height_diff = sc_height - ue_height;
        p.bs_sc = bs_sc;
        p.sc_ue = sc_ue;
        p.los_scale = los_scale;
        p.min_bs_sc_distance = min_bs_sc_distance;
        p.adhoc_distance = adhoc_distance;
        p.alpha = alpha;
        p.bandwidth = frame.bandwidth;
        return p;
    }

    namespace
    {
        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string unquote(std::string v)
        {
            boost::algorithm::trim(v);
            if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
                v = v.substr(1, v.size() - 2);
            return v;
        }

        double parse_double(const std::string &v)
        {
            std::size_t used = 0;
            const std::string t = unquote(v);
            const double d = std::stod(t, &used);
            if (used != t.size())
                throw std::invalid_argument("not a number: " + v);
            return d;
        }

        unsigned long long parse_unsigned(const std::string &v)
        {
            const std::string t = unquote(v);
            if (t.empty() || t.front() == '-')
                throw std::invalid_argument("not a non-negative integer: " + v);
            std::size_t used = 0;
            const auto n = std::stoull(t, &used);
            if (used != t.size())
                throw std::invalid_argument("not an integer: " + v);
            return n;
        }

        bool parse_bool(const std::string &v)
        {
            const std::string t = boost::algorithm::to_lower_copy(unquote(v));
            if (t == "true" || t == "1" || t == "yes")
                return true;
            if (t == "false" || t == "0" || t == "no")
                return false;
            throw std::invalid_argument("not a boolean: " + v);
        }

        std::vector<double> parse_list(const std::string &v)
        {
            std::string t = unquote(v);
            if (t.size() < 2 || t.front() != '[' || t.back() != ']')
                throw std::invalid_argument("expected [a, b, ...]: " + v);
            t = t.substr(1, t.size() - 2);
            std::vector<double> out;
            std::vector<std::string> parts;
            boost::algorithm::split(parts, t, boost::is_any_of(","));
            for (auto &p : parts)
            {
                boost::algorithm::trim(p);
                if (!p.empty())
                    out.push_back(parse_double(p));
            }
            return out;
        }

        std::string list_string(const std::vector<double> &v)
        {
            std::string s = "[";
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? ", " : "") + fmt(v[i]);
            return s + "]";
        }

        std::string dquote(std::string_view s) { return "\"" + std::string(s) + "\""; }

        std::string_view antenna_kind_name(AntennaKind k)
        {
            switch (k)
            {
            case AntennaKind::sector_3d:
                return "sector_3d";
            case AntennaKind::patch:
                return "patch";
            case AntennaKind::yagi:
                return "yagi";
            case AntennaKind::omni:
                return "omni";
            }
            return "unknown";
        }

        AntennaKind antenna_kind_from(std::string_view s)
        {
            for (auto k : {AntennaKind::sector_3d, AntennaKind::patch, AntennaKind::yagi, AntennaKind::omni})
                if (s == antenna_kind_name(k))
                    return k;
            throw std::invalid_argument("unknown antenna kind: " + std::string(s));
        }

        std::string_view los_form_name(LosModel::Form f)
        {
            switch (f)
            {
            case LosModel::Form::macro:
                return "macro";
            case LosModel::Form::relay_ue:
                return "relay_ue";
            case LosModel::Form::exponential:
                return "exponential";
            }
            return "unknown";
        }

        LosModel::Form los_form_from(std::string_view s)
        {
            for (auto f : {LosModel::Form::macro, LosModel::Form::relay_ue, LosModel::Form::exponential})
                if (s == los_form_name(f))
                    return f;
            throw std::invalid_argument("unknown LoS form: " + std::string(s));
        }

        struct Binding
        {
            std::string section;
            std::string key;
            std::function<void(CampaignConfig &, const std::string &)> set;
            std::function<std::string(const CampaignConfig &)> get;
        };

        using Bindings = std::vector<Binding>;

        template <typename Ref>
        void num(Bindings &b, const std::string &sec, const std::string &key, Ref ref)
        {
            b.push_back({sec, key, [ref](CampaignConfig &c, const std::string &v) { ref(c) = parse_double(v); },
                         [ref](const CampaignConfig &c) { return fmt(ref(const_cast<CampaignConfig &>(c))); }});
        }

        template <typename Ref>
        void count(Bindings &b, const std::string &sec, const std::string &key, Ref ref)
        {
            b.push_back({sec, key,
                         [ref](CampaignConfig &c, const std::string &v) {
                             using T = std::remove_reference_t<decltype(ref(c))>;
                             ref(c) = static_cast<T>(parse_unsigned(v));
                         },
                         [ref](const CampaignConfig &c) {
                             return std::to_string(ref(const_cast<CampaignConfig &>(c)));
                         }});
        }

        template <typename Ref>
        void flag(Bindings &b, const std::string &sec, const std::string &key, Ref ref)
        {
            b.push_back({sec, key, [ref](CampaignConfig &c, const std::string &v) { ref(c) = parse_bool(v); },
                         [ref](const CampaignConfig &c) {
                             return std::string(ref(const_cast<CampaignConfig &>(c)) ? "true" : "false");
                         }});
        }

        template <typename Ref>
        void list(Bindings &b, const std::string &sec, const std::string &key, Ref ref)
        {
            b.push_back({sec, key, [ref](CampaignConfig &c, const std::string &v) { ref(c) = parse_list(v); },
                         [ref](const CampaignConfig &c) {
                             return list_string(ref(const_cast<CampaignConfig &>(c)));
                         }});
        }

        void antenna(Bindings &b, const std::string &sec, AntennaPattern CampaignConfig::*member)
        {
            auto a = [member](CampaignConfig &c) -> AntennaPattern & { return c.*member; };
            num(b, sec, "horizontal_beamwidth_deg", [a](CampaignConfig &c) -> double & { return a(c).horizontal_beamwidth_deg; });
            num(b, sec, "vertical_beamwidth_deg", [a](CampaignConfig &c) -> double & { return a(c).vertical_beamwidth_deg; });
            num(b, sec, "max_gain_dbi", [a](CampaignConfig &c) -> double & { return a(c).max_gain_dbi; });
            num(b, sec, "downtilt_deg", [a](CampaignConfig &c) -> double & { return a(c).downtilt_deg; });
            num(b, sec, "front_back_v_db", [a](CampaignConfig &c) -> double & { return a(c).front_back_v_db; });
            num(b, sec, "front_back_h_db", [a](CampaignConfig &c) -> double & { return a(c).front_back_h_db; });
        }

        void profile(Bindings &b, const std::string &sec, LinkProfile CampaignConfig::*member)
        {
            auto p = [member](CampaignConfig &c) -> LinkProfile & { return c.*member; };
            num(b, sec, "eta_los", [p](CampaignConfig &c) -> double & { return p(c).eta_los; });
            num(b, sec, "eta_nlos", [p](CampaignConfig &c) -> double & { return p(c).eta_nlos; });
            num(b, sec, "intercept_los_db", [p](CampaignConfig &c) -> double & { return p(c).intercept_los_db; });
            num(b, sec, "intercept_nlos_db", [p](CampaignConfig &c) -> double & { return p(c).intercept_nlos_db; });
            num(b, sec, "shadow_sigma_los_db", [p](CampaignConfig &c) -> double & { return p(c).shadow_sigma_los_db; });
            num(b, sec, "shadow_sigma_nlos_db", [p](CampaignConfig &c) -> double & { return p(c).shadow_sigma_nlos_db; });
            num(b, sec, "shadow_correlation", [p](CampaignConfig &c) -> double & { return p(c).shadow_correlation; });
            b.push_back({sec, "los_form",
                         [p](CampaignConfig &c, const std::string &v) { p(c).los_model.form = los_form_from(unquote(v)); },
                         [p](const CampaignConfig &c) {
                             return dquote(los_form_name(p(const_cast<CampaignConfig &>(c)).los_model.form));
                         }});
            num(b, sec, "los_a", [p](CampaignConfig &c) -> double & { return p(c).los_model.a; });
            num(b, sec, "los_b", [p](CampaignConfig &c) -> double & { return p(c).los_model.b; });
            num(b, sec, "los_scale", [p](CampaignConfig &c) -> double & { return p(c).los_model.scale; });
            count(b, sec, "site_planning_trials", [p](CampaignConfig &c) -> unsigned & { return p(c).site_planning_trials; });
            num(b, sec, "site_planning_nlos_bonus_db",
                [p](CampaignConfig &c) -> double & { return p(c).site_planning_nlos_bonus_db; });
        }

        const Bindings &bindings()
        {
            static const Bindings table = [] {
                Bindings b;
                using C = CampaignConfig;
                b.push_back({"campaign", "architecture",
                             [](C &c, const std::string &v) { c.architecture = architecture_from_string(unquote(v)); },
                             [](const C &c) { return dquote(to_string(c.architecture)); }});
                count(b, "campaign", "n_drops", [](C &c) -> std::size_t & { return c.n_drops; });
                count(b, "campaign", "master_seed", [](C &c) -> std::uint64_t & { return c.master_seed; });
                b.push_back({"campaign", "output_dir", [](C &c, const std::string &v) { c.output_dir = unquote(v); },
                             [](const C &c) { return dquote(c.output_dir); }});
                b.push_back({"campaign", "threads",
                             [](C &c, const std::string &v) { c.threads = static_cast<int>(parse_unsigned(v)); },
                             [](const C &c) { return std::to_string(c.threads); }});
                num(b, "campaign", "alpha", [](C &c) -> double & { return c.alpha; });
                list(b, "campaign", "alpha_grid", [](C &c) -> std::vector<double> & { return c.alpha_grid; });
                flag(b, "campaign", "collect_all_sites", [](C &c) -> bool & { return c.collect_all_sites; });
                count(b, "campaign", "bootstrap_resamples", [](C &c) -> std::size_t & { return c.bootstrap_resamples; });
                flag(b, "campaign", "dump_sinr", [](C &c) -> bool & { return c.dump_sinr; });
                flag(b, "campaign", "association_only", [](C &c) -> bool & { return c.association_only; });
                count(b, "campaign", "max_resamples", [](C &c) -> std::size_t & { return c.max_resamples; });

                num(b, "layout", "inter_site_distance", [](C &c) -> double & { return c.inter_site_distance; });
                count(b, "layout", "n_sites", [](C &c) -> std::size_t & { return c.n_sites; });

                num(b, "deployment", "mean_ues_per_sector", [](C &c) -> double & { return c.mean_ues_per_sector; });
                num(b, "deployment", "mean_scs_per_sector", [](C &c) -> double & { return c.mean_scs_per_sector; });
                num(b, "deployment", "adhoc_distance", [](C &c) -> double & { return c.adhoc_distance; });
                num(b, "deployment", "min_bs_sc_distance", [](C &c) -> double & { return c.min_bs_sc_distance; });
                num(b, "deployment", "bs_height", [](C &c) -> double & { return c.bs_height; });
                num(b, "deployment", "sc_height", [](C &c) -> double & { return c.sc_height; });
                num(b, "deployment", "ue_height", [](C &c) -> double & { return c.ue_height; });
                b.push_back({"deployment", "sc_access_antenna",
                             [](C &c, const std::string &v) { c.sc_access_antenna = antenna_kind_from(unquote(v)); },
                             [](const C &c) { return dquote(antenna_kind_name(c.sc_access_antenna)); }});

                num(b, "radio", "bs_power_dbm", [](C &c) -> double & { return c.bs_power_dbm; });
                num(b, "radio", "sc_power_dbm", [](C &c) -> double & { return c.sc_power_dbm; });
                num(b, "radio", "ue_power_dbm", [](C &c) -> double & { return c.ue_power_dbm; });
                num(b, "radio", "bs_noise_figure_db", [](C &c) -> double & { return c.bs_noise_figure_db; });
                num(b, "radio", "sc_noise_figure_db", [](C &c) -> double & { return c.sc_noise_figure_db; });
                num(b, "radio", "ue_noise_figure_db", [](C &c) -> double & { return c.ue_noise_figure_db; });
                num(b, "radio", "noise_psd_dbm_hz", [](C &c) -> double & { return c.noise_psd_dbm_hz; });
                num(b, "radio", "carrier_hz", [](C &c) -> double & { return c.carrier_hz; });
                num(b, "radio", "sc_backhaul_gain_dbi", [](C &c) -> double & { return c.sc_backhaul_gain_dbi; });
                num(b, "radio", "ue_gain_dbi", [](C &c) -> double & { return c.ue_gain_dbi; });
                num(b, "radio", "bandwidth_hz", [](C &c) -> double & { return c.frame.bandwidth; });
                count(b, "radio", "resource_blocks", [](C &c) -> std::size_t & { return c.frame.resource_blocks; });
                num(b, "radio", "rb_bandwidth_hz", [](C &c) -> double & { return c.frame.rb_bandwidth; });
                num(b, "radio", "slot_duration_s", [](C &c) -> double & { return c.frame.slot_duration; });
                num(b, "radio", "training_symbols", [](C &c) -> double & { return c.frame.training_symbols; });
                num(b, "radio", "symbols_per_slot", [](C &c) -> double & { return c.frame.symbols_per_slot; });

                count(b, "mimo", "antennas", [](C &c) -> std::size_t & { return c.antennas; });
                num(b, "mimo", "antenna_spacing", [](C &c) -> double & { return c.antenna_spacing; });
                count(b, "mimo", "pilot_codebook", [](C &c) -> std::size_t & { return c.pilot_codebook; });
                b.push_back({"mimo", "power_normalization",
                             [](C &c, const std::string &v) {
                                 c.power_normalization = power_normalization_from_string(unquote(v));
                             },
                             [](const C &c) { return dquote(to_string(c.power_normalization)); }});
                flag(b, "mimo", "perfect_backhaul_csi", [](C &c) -> bool & { return c.perfect_backhaul_csi; });
                num(b, "mimo", "condition_limit", [](C &c) -> double & { return c.condition_limit; });
                count(b, "mimo", "rb_samples", [](C &c) -> std::size_t & { return c.rb_samples; });
                flag(b, "mimo", "da_all_served", [](C &c) -> bool & { return c.da_all_served; });
                flag(b, "mimo", "da_wideband_sinr", [](C &c) -> bool & { return c.da_wideband_sinr; });

                antenna(b, "bs_antenna", &C::bs_antenna);
                antenna(b, "patch", &C::patch);
                antenna(b, "yagi", &C::yagi);
                profile(b, "bs_sc", &C::bs_sc);
                profile(b, "sc_ue", &C::sc_ue);
                profile(b, "bs_ue", &C::bs_ue);

                b.push_back({"analytic", "method",
                             [](C &c, const std::string &v) {
                                 c.quadrature.method = quadrature_method_from_string(unquote(v));
                             },
                             [](const C &c) { return dquote(to_string(c.quadrature.method)); }});
                num(b, "analytic", "rel_tol", [](C &c) -> double & { return c.quadrature.rel_tol; });
                num(b, "analytic", "abs_tol", [](C &c) -> double & { return c.quadrature.abs_tol; });
                count(b, "analytic", "max_depth", [](C &c) -> unsigned & { return c.quadrature.max_depth; });
                num(b, "analytic", "los_scale", [](C &c) -> double & { return c.los_scale; });
                list(b, "analytic", "density_multipliers",
                     [](C &c) -> std::vector<double> & { return c.density_multipliers; });
                return b;
            }();
            return table;
        }

        // Drops trailing "# ..." comments outside quotes; the INI reader only
        // understands whole-line comments.
        std::string strip_inline_comments(const std::string &text)
        {
            std::istringstream in(text);
            std::ostringstream out;
            std::string line;
            while (std::getline(in, line))
            {
                bool quote = false;
                for (std::size_t i = 0; i < line.size(); ++i)
                {
                    if (line[i] == '"')
                        quote = !quote;
                    else if (line[i] == '#' && !quote)
                    {
                        line.resize(i);
                        break;
                    }
                }
                out << line << '\n';
            }
            return out.str();
        }
    } // namespace

    CampaignConfig config_from_string(const std::string &text)
    {
        boost::property_tree::ptree tree;
        std::istringstream in(strip_inline_comments(text));
        try
        {
            boost::property_tree::ini_parser::read_ini(in, tree);
        }
        catch (const boost::property_tree::ini_parser_error &e)
        {
            throw std::invalid_argument(std::string("config parse error: ") + e.what());
        }

        std::map<std::string, const Binding *> index;
        for (const auto &b : bindings())
            index[b.section + "." + b.key] = &b;

        CampaignConfig cfg;
        for (const auto &[section, body] : tree)
        {
            if (body.empty())
                throw std::invalid_argument("config key outside a section: " + section);
            for (const auto &[key, value] : body)
            {
                const auto it = index.find(section + "." + key);
                if (it == index.end())
                    throw std::invalid_argument("unknown config key: " + section + "." + key);
                try
                {
                    it->second->set(cfg, value.data());
                }
                catch (const std::invalid_argument &e)
                {
                    throw std::invalid_argument(section + "." + key + ": " + e.what());
                }
                catch (const std::out_of_range &)
                {
                    throw std::invalid_argument(section + "." + key + ": value out of range");
                }
            }
        }
        cfg.validate();
        return cfg;
    }

    CampaignConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return config_from_string(ss.str());
    }

    std::string to_config_string(const CampaignConfig &cfg)
    {
        std::ostringstream out;
        std::string section;
        for (const auto &b : bindings())
        {
            if (b.section != section)
            {
                if (!section.empty())
                    out << '\n';
                section = b.section;
                out << '[' << section << "]\n";
            }
            out << b.key << " = " << b.get(cfg) << '\n';
        }
        return out.str();
    }

    std::string config_hash(const CampaignConfig &cfg)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : to_config_string(cfg))
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

} // namespace sbh
