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

#include "sbh/drop.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sbh/mimo.hpp"
#include "sbh/rates.hpp"

namespace sbh
{
    double UeRecord::end_to_end(double alpha) const
    {
        if (k_l == 0)
            return 0.0;
        return std::min(backhaul_rate(alpha), access_rate(alpha));
    }

    namespace
    {
        constexpr std::uint64_t kResampleStride = std::uint64_t{1} << 40;
        // Keeps BS links off the r <= delta singularity of the vertical pattern.
        constexpr double kMinHorizontal = 0.01;

        std::uint64_t fnv(std::uint64_t h, double v)
        {
            unsigned char b[sizeof v];
            std::memcpy(b, &v, sizeof v);
            for (unsigned char c : b)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        }

        /// Links from every sector to one class of receivers (SCs or UEs).
        /// LoS state, distance and shadowing are per site; gain and angle per sector.
        struct BsLinks
        {
            Eigen::MatrixXd gain_db;          // receiver x sector, total large-scale gain
            Eigen::MatrixXd angle;            // receiver x sector, off own boresight
            Eigen::MatrixXd dist3;            // receiver x site
            std::vector<char> los;            // receiver * n_sites + site
            std::size_t n_sites = 0;

            bool is_los(std::size_t rx, std::size_t site) const { return los[rx * n_sites + site] != 0; }
        };

        BsLinks bs_links(const NetworkLayout &layout, const std::vector<Point3> &rx, const LinkProfile &profile,
                         const AntennaPattern &bs_antenna, double bs_height, double rx_gain_db,
                         const StreamFactory &streams, std::uint64_t key, StreamTag tag)
        {
            const std::size_t n_sites = layout.n_sites, spp = layout.sectors_per_site;
            BsLinks out;
            out.n_sites = n_sites;
            out.gain_db.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(layout.n_sectors()));
            out.angle.resizeLike(out.gain_db);
            out.dist3.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(n_sites));
            out.los.resize(rx.size() * n_sites);
            for (std::size_t r = 0; r < rx.size(); ++r)
            {
                Engine rng = streams.stream(key, tag, r);
                const double delta = bs_height - rx[r].height;
                const auto ri = static_cast<Eigen::Index>(r);
                for (std::size_t site = 0; site < n_sites; ++site)
                {
                    const Vec2 d = layout.wrap_delta(layout.site_positions[site], rx[r].xy);
                    const double d2 = std::max(d.norm(), kMinHorizontal);
                    const double d3 = std::hypot(d2, delta);
                    const bool los = rng.uniform() < los_probability(profile, d2);
                    const double shadow = profile.shadow_sigma_db(los) * rng.normal();
                    const double base = -pathloss_db(profile, los, d3) + shadow + rx_gain_db;
                    out.los[r * n_sites + site] = los ? 1 : 0;
                    out.dist3(ri, static_cast<Eigen::Index>(site)) = d3;
                    const double az = d.azimuth();
                    for (std::size_t s = 0; s < spp; ++s)
                    {
                        const std::size_t sector = site * spp + s;
                        const auto ci = static_cast<Eigen::Index>(sector);
                        const double theta = wrap_angle(az - layout.sector_boresights[sector]);
                        out.angle(ri, ci) = theta;
                        out.gain_db(ri, ci) = base + sector_antenna_gain_db(bs_antenna, theta, d3, delta, 1);
                    }
                }
            }
            return out;
        }

        /// SC-to-UE links: UE rows, SC columns.
        struct ScUeLinks
        {
            Eigen::MatrixXd gain_db;
            Eigen::MatrixXd dist3;
            std::vector<char> los; // ue * n_sc + sc
            std::size_t n_sc = 0;

            bool is_los(std::size_t ue, std::size_t sc) const { return los[ue * n_sc + sc] != 0; }
        };

        ScUeLinks sc_ue_links(const NetworkLayout &layout, const Deployment &dep, const LinkProfile &profile,
                              const AntennaPattern &pattern, const std::vector<double> &orientation, double ue_gain_db,
                              const StreamFactory &streams, std::uint64_t key)
        {
            const std::size_t n_ue = dep.n_ue(), n_sc = dep.n_sc();
            ScUeLinks out;
            out.n_sc = n_sc;
            out.gain_db.resize(static_cast<Eigen::Index>(n_ue), static_cast<Eigen::Index>(n_sc));
            out.dist3.resizeLike(out.gain_db);
            out.los.resize(n_ue * n_sc);
            const double rho = profile.shadow_correlation;
            const double a = std::sqrt(rho), b = std::sqrt(1.0 - rho);
            for (std::size_t k = 0; k < n_ue; ++k)
            {
                Engine rng = streams.stream(key, StreamTag::sc_ue_large_scale, k);
                const double common = rng.normal();
                const Point3 &u = dep.ue_positions[k];
                for (std::size_t l = 0; l < n_sc; ++l)
                {
                    const Point3 &s = dep.sc_positions[l];
                    const Vec2 d = layout.wrap_delta(s.xy, u.xy);
                    const double d2 = d.norm();
                    const double dh = s.height - u.height;
                    const double d3 = std::hypot(d2, dh);
                    const bool los = rng.uniform() < los_probability(profile, d2);
                    const double shadow = profile.shadow_sigma_db(los) * (a * common + b * rng.normal());
                    const double elevation = std::atan2(dh, d2);
                    const double tx = downward_gain_db(pattern, elevation, d.azimuth() - orientation[l]);
                    const auto ki = static_cast<Eigen::Index>(k), li = static_cast<Eigen::Index>(l);
                    out.gain_db(ki, li) = -pathloss_db(profile, los, d3) + shadow + tx + ue_gain_db;
                    out.dist3(ki, li) = d3;
                    out.los[k * n_sc + l] = los ? 1 : 0;
                }
            }
            return out;
        }

        Eigen::MatrixXd plus(const Eigen::MatrixXd &m, double offset) { return m.array() + offset; }

        /// Everything one attempt needs, derived from the engine and the key.
        struct Context
        {
            const CampaignConfig &cfg;
            const NetworkLayout &layout;
            const ArrayCorrelation &corr;
            StreamFactory streams;
            std::uint64_t key;

            std::size_t antennas() const { return corr.antennas(); }

            /// One BS-to-receiver vector channel, keyed so that every caller
            /// asking for (sector, node, slot, rb) sees the same realisation.
            CVector channel(StreamTag tag, std::size_t sector, std::size_t node, std::size_t slot, std::size_t rb,
                            double gain_db, double dist3, double angle) const
            {
                Engine rng = streams.stream(key, tag, sector, node, slot, rb);
                return std::sqrt(db_to_linear(gain_db)) * small_scale(rng, rician_k_db(dist3), corr, angle);
            }

            /// Adds the same realisation as channel() into split LoS and white
            /// parts; the white sum is coloured once by colour().
            void accumulate(StreamTag tag, std::size_t sector, std::size_t node, std::size_t slot, std::size_t rb,
                            double gain_db, double dist3, double angle, CVector &los, CVector &white) const
            {
                Engine rng = streams.stream(key, tag, sector, node, slot, rb);
                const double beta = db_to_linear(gain_db);
                const double k = db_to_linear(rician_k_db(dist3));
                const double w = std::sqrt(beta / (k + 1.0));
                for (Eigen::Index m = 0; m < white.size(); ++m)
                    white(m) += w * rng.complex_normal();
                los += std::sqrt(beta * k / (k + 1.0)) * steering_vector(antennas(), corr.spacing(), angle);
            }

            CVector colour(const CVector &los, const CVector &white) const
            {
                CVector h(los.size());
                h.real() = corr.sqrt_matrix() * white.real();
                h.imag() = corr.sqrt_matrix() * white.imag();
                return h + los;
            }
        };

        double noise_watt(const CampaignConfig &cfg, double bandwidth, double nf_db)
        {
            return dbm_to_watt(thermal_noise_dbm(cfg.noise_psd_dbm_hz, bandwidth, nf_db));
        }

        void track_power(DropResult &out, const PrecodeResult &pre)
        {
            const double err = std::abs(pre.power.sum() - pre.total_power) / pre.total_power;
            out.max_power_error = std::max(out.max_power_error, err);
        }

        std::size_t lcm_of(const std::vector<std::size_t> &v)
        {
            std::size_t l = 1;
            for (std::size_t g : v)
                if (g > 0)
                    l = std::lcm(l, g);
            return l;
        }
    } // namespace

    DropEngine::DropEngine(CampaignConfig cfg)
        : cfg_(std::move(cfg)), layout_(build_layout(cfg_.inter_site_distance, cfg_.n_sites)),
          corr_(cfg_.antennas, cfg_.antenna_spacing)
    {
        cfg_.validate();
    }

    bool DropEngine::observed(std::size_t sector) const
    {
        return cfg_.collect_all_sites || layout_.site_of(sector) == 0;
    }

    DropResult DropEngine::run(std::uint64_t drop) const
    {
        for (std::size_t attempt = 0; attempt <= cfg_.max_resamples; ++attempt)
        {
            try
            {
                DropResult r = this->attempt(drop, drop + attempt * kResampleStride);
                r.resamples = attempt;
                return r;
            }
            catch (const SingularChannelError &)
            {
            }
        }
        throw std::runtime_error("drop " + std::to_string(drop) + ": precoder singular after " +
                                 std::to_string(cfg_.max_resamples) + " resamples");
    }

    DropSnapshot DropEngine::snapshot(std::uint64_t drop) const
    {
        const StreamFactory streams(cfg_.master_seed);
        Engine rng = streams.stream(drop, StreamTag::node_drop);
        DropSnapshot snap;
        snap.deployment = drop_nodes(layout_, cfg_.deployment_spec(), rng);
        const Deployment &dep = snap.deployment;
        if (is_self_backhaul(cfg_.architecture))
        {
            std::vector<double> orient(dep.n_sc());
            Engine o = streams.stream(drop, StreamTag::sc_orientation);
            for (double &v : orient)
                v = kTwoPi * o.uniform();
            const BsLinks bs_sc = bs_links(layout_, dep.sc_positions, cfg_.bs_sc, cfg_.bs_antenna, cfg_.bs_height,
                                           cfg_.sc_backhaul_gain_dbi, streams, drop, StreamTag::bs_sc_large_scale);
            const ScUeLinks sc_ue = sc_ue_links(layout_, dep, cfg_.sc_ue, cfg_.sc_access_pattern(), orient,
                                                cfg_.ue_gain_dbi, streams, drop);
            snap.association = associate_self_backhaul(plus(sc_ue.gain_db, cfg_.sc_power_dbm),
                                                       plus(bs_sc.gain_db, cfg_.bs_power_dbm));
        }
        else
        {
            const BsLinks bs_ue = bs_links(layout_, dep.ue_positions, cfg_.bs_ue, cfg_.bs_antenna, cfg_.bs_height,
                                           cfg_.ue_gain_dbi, streams, drop, StreamTag::bs_ue_large_scale);
            snap.association = associate_direct(plus(bs_ue.gain_db, cfg_.bs_power_dbm));
            snap.ue_sector_server = snap.association.ue_server;
        }
        return snap;
    }

    DropResult DropEngine::attempt(std::uint64_t drop, std::uint64_t key) const
    {
        const CampaignConfig &cfg = cfg_;
        const Context ctx{cfg, layout_, corr_, StreamFactory(cfg.master_seed), key};
        const std::size_t n_sectors = layout_.n_sectors();
        const std::size_t spp = layout_.sectors_per_site;

        Engine drop_rng = ctx.streams.stream(key, StreamTag::node_drop);
        const Deployment dep = drop_nodes(layout_, cfg.deployment_spec(), drop_rng);

        DropResult out;
        out.drop = drop;
        out.n_sc = dep.n_sc();
        out.n_ue = dep.n_ue();

        const double bs_power = dbm_to_watt(cfg.bs_power_dbm);
        const double ul_power = dbm_to_watt(cfg.ue_power_dbm);
        const double bs_noise = noise_watt(cfg, cfg.frame.bandwidth, cfg.bs_noise_figure_db);
        const std::size_t rb_samples = cfg.rb_samples;
        std::uint64_t hash = 0xcbf29ce484222325ULL;

        if (is_self_backhaul(cfg.architecture))
        {
            const std::size_t n_sc = dep.n_sc(), n_ue = dep.n_ue();
            std::vector<double> orient(n_sc);
            Engine o = ctx.streams.stream(key, StreamTag::sc_orientation);
            for (double &v : orient)
                v = kTwoPi * o.uniform();

            const BsLinks bs_sc = bs_links(layout_, dep.sc_positions, cfg.bs_sc, cfg.bs_antenna, cfg.bs_height,
                                           cfg.sc_backhaul_gain_dbi, ctx.streams, key, StreamTag::bs_sc_large_scale);
            const ScUeLinks sc_ue = sc_ue_links(layout_, dep, cfg.sc_ue, cfg.sc_access_pattern(), orient,
                                                cfg.ue_gain_dbi, ctx.streams, key);
            const Association assoc = associate_self_backhaul(plus(sc_ue.gain_db, cfg.sc_power_dbm),
                                                              plus(bs_sc.gain_db, cfg.bs_power_dbm));

            for (std::size_t i = 0; i < n_sectors; ++i)
            {
                if (!observed(i))
                    continue;
                SectorLoad load;
                load.sector = i;
                load.attached_scs = assoc.sector_scs[i].size();
                for (std::size_t l : assoc.sector_scs[i])
                {
                    if (assoc.sc_active[l])
                    {
                        ++load.active_scs;
                        load.served_ues += assoc.sc_ues[l].size();
                    }
                }
                load.ues = load.served_ues;
                out.loads.push_back(load);
            }

            // Backhaul: ZF from every sector to its active SCs.
            std::vector<std::vector<std::size_t>> served(n_sectors);
            for (std::size_t i = 0; i < n_sectors; ++i)
                served[i] = assoc.active_scs_of(i);
            Engine sched = ctx.streams.stream(key, StreamTag::backhaul_scheduler);
            const PilotPlan plan =
                plan_pilots(PilotReuse::orthogonal_backhaul, served, spp, cfg.pilot_codebook, sched, cfg.antennas);

            // Observed SCs: those whose serving sector is observed.
            std::vector<std::size_t> obs_sc;
            for (std::size_t l = 0; l < n_sc; ++l)
                if (observed(assoc.sc_server[l]))
                    obs_sc.push_back(l);
            // Backhaul SINRs are also needed for SCs outside the observed
            // sectors that serve an observed UE.
            std::vector<std::size_t> bh_sc = obs_sc;
            if (!assoc.ue_server.empty())
                for (std::size_t k = 0; k < n_ue; ++k)
                    if (observed(dep.ue_sector[k]) && !observed(assoc.sc_server[assoc.ue_server[k]]))
                        bh_sc.push_back(assoc.ue_server[k]);
            std::sort(bh_sc.begin(), bh_sc.end());
            bh_sc.erase(std::unique(bh_sc.begin(), bh_sc.end()), bh_sc.end());
            std::vector<long> stream_of(n_sc, -1);
            for (std::size_t i = 0; i < n_sectors; ++i)
                for (std::size_t j = 0; j < plan.trained[i].size(); ++j)
                    stream_of[plan.trained[i][j]] = static_cast<long>(j);

            std::vector<double> bh_se(n_sc, 0.0);
            if (!cfg.association_only)
            {
                const double sc_noise = noise_watt(cfg, cfg.frame.bandwidth, cfg.sc_noise_figure_db);
                auto bs_sc_channel = [&](std::size_t sector, std::size_t l, std::size_t q) {
                    const auto li = static_cast<Eigen::Index>(l), si = static_cast<Eigen::Index>(sector);
                    return ctx.channel(StreamTag::backhaul_fading, sector, l, 0, q, bs_sc.gain_db(li, si),
                                       bs_sc.dist3(li, static_cast<Eigen::Index>(layout_.site_of(sector))),
                                       bs_sc.angle(li, si));
                };
                for (std::size_t q = 0; q < rb_samples; ++q)
                {
                    std::vector<CMatrix> eff(n_sectors);
                    for (std::size_t i = 0; i < n_sectors; ++i)
                    {
                        const auto &nodes = plan.trained[i];
                        if (nodes.empty())
                            continue;
                        CMatrix h(static_cast<Eigen::Index>(cfg.antennas), static_cast<Eigen::Index>(nodes.size()));
                        for (std::size_t j = 0; j < nodes.size(); ++j)
                            h.col(static_cast<Eigen::Index>(j)) = bs_sc_channel(i, nodes[j], q);
                        CMatrix h_hat = h;
                        if (!cfg.perfect_backhaul_csi)
                        {
                            Engine est = ctx.streams.stream(key, StreamTag::backhaul_estimation, i, q);
                            h_hat = ls_estimate(h, {}, ul_power, bs_noise, est).h_hat;
                        }
                        const PrecodeResult pre =
                            zf_precode(h_hat, bs_power, cfg.power_normalization, cfg.condition_limit);
                        track_power(out, pre);
                        eff[i] = pre.effective();
                    }
                    std::vector<CVector> chans(n_sectors);
                    for (std::size_t l : bh_sc)
                    {
                        if (stream_of[l] < 0)
                            continue;
                        for (std::size_t i = 0; i < n_sectors; ++i)
                            chans[i] = eff[i].size() ? bs_sc_channel(i, l, q) : CVector();
                        const StreamSinr s = downlink_sinr(chans, eff, assoc.sc_server[l],
                                                           static_cast<std::size_t>(stream_of[l]), sc_noise);
                        bh_se[l] += std::log2(1.0 + s.value()) / static_cast<double>(rb_samples);
                        if (cfg.dump_sinr)
                            out.backhaul_sinr.push_back(s.value());
                    }
                }
            }

            FrameConfig full = cfg.frame;
            full.alpha = 1.0;
            const double bh_unit = full.alpha * (1.0 - full.training_fraction()) * full.bandwidth;
            for (std::size_t l : obs_sc)
            {
                ScRecord r;
                r.sc = l;
                r.sector = assoc.sc_server[l];
                r.backhaul_los = bs_sc.is_los(l, layout_.site_of(r.sector));
                r.active = assoc.sc_active[l] != 0;
                r.trained = stream_of[l] >= 0;
                r.k_l = assoc.sc_ues[l].size();
                r.backhaul_capacity = bh_unit * bh_se[l];
                hash = fnv(hash, r.backhaul_capacity);
                out.scs.push_back(r);
            }

            // Access: SISO per RB from every active SC, full buffer.
            const std::size_t q_t = cfg.frame.resource_blocks;
            const double rb_power = dbm_to_watt(cfg.sc_power_dbm) / static_cast<double>(q_t);
            const double ue_noise = noise_watt(cfg, cfg.frame.rb_bandwidth, cfg.ue_noise_figure_db);
            std::vector<std::size_t> active;
            for (std::size_t l = 0; l < n_sc; ++l)
                if (assoc.sc_active[l])
                    active.push_back(l);
            FrameConfig access_frame = cfg.frame;
            access_frame.alpha = 0.0;

            std::vector<std::vector<std::size_t>> alloc(n_sc);
            std::vector<double> sig(q_t), intf(q_t), sinr(q_t);
            for (std::size_t k = 0; k < n_ue; ++k)
            {
                if (!observed(dep.ue_sector[k]))
                    continue;
                UeRecord r;
                r.ue = k;
                r.sector = dep.ue_sector[k];
                if (assoc.ue_server.empty())
                {
                    r.scheduled = false;
                    out.ues.push_back(r);
                    continue;
                }
                const std::size_t l = assoc.ue_server[k];
                r.server = l;
                r.k_l = assoc.sc_ues[l].size();
                r.access_los = sc_ue.is_los(k, l);
                r.backhaul_los = bs_sc.is_los(l, layout_.site_of(assoc.sc_server[l]));
                r.scheduled = stream_of[l] >= 0;

                if (!cfg.association_only)
                {
                    if (alloc[l].empty())
                    {
                        Engine rr = ctx.streams.stream(key, StreamTag::rr_allocation, l);
                        alloc[l] = rr_allocate(q_t, r.k_l, rr);
                    }
                    const auto &members = assoc.sc_ues[l];
                    const auto pos = static_cast<std::size_t>(
                        std::find(members.begin(), members.end(), k) - members.begin());

                    std::fill(intf.begin(), intf.end(), 0.0);
                    const auto ki = static_cast<Eigen::Index>(k);
                    for (std::size_t m : active)
                    {
                        const auto mi = static_cast<Eigen::Index>(m);
                        const double beta = db_to_linear(sc_ue.gain_db(ki, mi));
                        const double kdb = rician_k_db(sc_ue.dist3(ki, mi));
                        Engine f = ctx.streams.stream(key, StreamTag::access_fading, k, m);
                        auto &dst = m == l ? sig : intf;
                        for (std::size_t q = 0; q < q_t; ++q)
                        {
                            const double g = beta * std::norm(small_scale_siso(f, kdb));
                            if (m == l)
                                dst[q] = g;
                            else
                                dst[q] += g;
                        }
                    }
                    for (std::size_t q = 0; q < q_t; ++q)
                        sinr[q] = rb_power * sig[q] / (rb_power * intf[q] + ue_noise);
                    r.access_capacity = access_rate(access_frame, alloc[l], pos, sinr);
                    const double bh = r.scheduled ? bh_unit * bh_se[l] : 0.0;
                    r.backhaul_share = bh / static_cast<double>(r.k_l);
                }
                hash = fnv(fnv(hash, r.access_capacity), r.backhaul_share);
                out.ues.push_back(r);
            }
            out.sinr_hash = hash;
            return out;
        }

        // Direct access.
        const std::size_t n_ue = dep.n_ue();
        const BsLinks bs_ue = bs_links(layout_, dep.ue_positions, cfg.bs_ue, cfg.bs_antenna, cfg.bs_height,
                                       cfg.ue_gain_dbi, ctx.streams, key, StreamTag::bs_ue_large_scale);
        const Association assoc = associate_direct(plus(bs_ue.gain_db, cfg.bs_power_dbm));
        const PilotReuse reuse = cfg.architecture == Architecture::da_r3 ? PilotReuse::r3 : PilotReuse::r1;
        const std::size_t b = cfg.pilot_codebook;

        for (std::size_t i = 0; i < n_sectors; ++i)
        {
            if (!observed(i))
                continue;
            SectorLoad load;
            load.sector = i;
            load.ues = load.served_ues = assoc.sector_ues[i].size();
            out.loads.push_back(load);
        }

        // Time sharing: sector i splits its K_i UEs into ceil(K_i / B) pilot
        // groups and serves group t mod g_i in slot t; G = lcm of the g_i
        // slots covers every group an integral number of times.
        std::vector<std::vector<std::vector<std::size_t>>> groups(n_sectors);
        std::vector<std::size_t> n_groups(n_sectors, 0);
        for (std::size_t i = 0; i < n_sectors; ++i)
        {
            std::vector<std::size_t> ues = assoc.sector_ues[i];
            if (ues.empty())
                continue;
            if (!cfg.da_all_served)
            {
                groups[i].push_back(ues);
                n_groups[i] = 1;
                continue;
            }
            Engine g = ctx.streams.stream(key, StreamTag::da_scheduler, 0, i);
            for (std::size_t n = ues.size(); n > 1; --n)
            {
                const auto j = std::min(n - 1, static_cast<std::size_t>(g.uniform() * static_cast<double>(n)));
                std::swap(ues[n - 1], ues[j]);
            }
            const std::size_t ng = (ues.size() + b - 1) / b;
            groups[i].resize(ng);
            for (std::size_t j = 0; j < ues.size(); ++j)
                groups[i][j % ng].push_back(ues[j]);
            for (auto &grp : groups[i])
                std::sort(grp.begin(), grp.end());
            n_groups[i] = ng;
        }
        const std::size_t slots = lcm_of(n_groups);

        std::vector<double> se_sum(n_ue, 0.0);
        std::vector<std::size_t> served_slots(n_ue, 0);
        std::vector<char> ever_trained(n_ue, 0);
        const double ue_noise = noise_watt(cfg, cfg.frame.bandwidth, cfg.ue_noise_figure_db);

        auto gain = [&](std::size_t sector, std::size_t k) {
            return bs_ue.gain_db(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(sector));
        };
        auto dist = [&](std::size_t sector, std::size_t k) {
            return bs_ue.dist3(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(layout_.site_of(sector)));
        };
        auto ang = [&](std::size_t sector, std::size_t k) {
            return bs_ue.angle(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(sector));
        };

        for (std::size_t t = 0; t < slots; ++t)
        {
            std::vector<std::vector<std::size_t>> served(n_sectors);
            for (std::size_t i = 0; i < n_sectors; ++i)
                if (n_groups[i] > 0)
                    served[i] = groups[i][t % n_groups[i]];
            Engine sched = ctx.streams.stream(key, StreamTag::da_scheduler, 1, t);
            const PilotPlan plan = plan_pilots(reuse, served, spp, b, sched, b);

            std::vector<long> stream_of(n_ue, -1);
            for (std::size_t i = 0; i < n_sectors; ++i)
                for (std::size_t j = 0; j < plan.trained[i].size(); ++j)
                {
                    stream_of[plan.trained[i][j]] = static_cast<long>(j);
                    ever_trained[plan.trained[i][j]] = 1;
                }
            if (cfg.association_only)
                continue;

            std::vector<std::vector<double>> slot_sinr(n_ue);
            for (std::size_t q = 0; q < rb_samples; ++q)
            {
                std::vector<CMatrix> eff(n_sectors);
                for (std::size_t i = 0; i < n_sectors; ++i)
                {
                    const auto &nodes = plan.trained[i];
                    if (nodes.empty())
                        continue;
                    const auto m = static_cast<Eigen::Index>(cfg.antennas);
                    const auto n = static_cast<Eigen::Index>(nodes.size());
                    CMatrix h(m, n), contam = CMatrix::Zero(m, n);
                    for (std::size_t j = 0; j < nodes.size(); ++j)
                    {
                        const std::size_t k = nodes[j];
                        h.col(static_cast<Eigen::Index>(j)) =
                            ctx.channel(StreamTag::da_fading, i, k, t, q, gain(i, k), dist(i, k), ang(i, k));
                        CVector los = CVector::Zero(m), white = CVector::Zero(m);
                        bool any = false;
                        for (std::size_t other : plan.contamination[i])
                        {
                            const std::size_t k2 = plan.owner[other][plan.pilot[i][j]];
                            if (k2 == kNoNode)
                                continue;
                            ctx.accumulate(StreamTag::da_fading, i, k2, t, q, gain(i, k2), dist(i, k2), ang(i, k2),
                                           los, white);
                            any = true;
                        }
                        if (any)
                            contam.col(static_cast<Eigen::Index>(j)) = ctx.colour(los, white);
                    }
                    Engine est = ctx.streams.stream(key, StreamTag::da_estimation, i, t, q);
                    const CMatrix parts[1] = {contam};
                    const EstimatedChannels e = ls_estimate(h, parts, ul_power, bs_noise, est);
                    const PrecodeResult pre =
                        zf_precode(e.h_hat, bs_power, cfg.power_normalization, cfg.condition_limit);
                    track_power(out, pre);
                    eff[i] = pre.effective();
                }
                std::vector<CVector> chans(n_sectors);
                for (std::size_t k = 0; k < n_ue; ++k)
                {
                    if (stream_of[k] < 0 || !observed(dep.ue_sector[k]))
                        continue;
                    for (std::size_t i = 0; i < n_sectors; ++i)
                        chans[i] = eff[i].size()
                                       ? ctx.channel(StreamTag::da_fading, i, k, t, q, gain(i, k), dist(i, k), ang(i, k))
                                       : CVector();
                    const StreamSinr s = downlink_sinr(chans, eff, assoc.ue_server[k],
                                                       static_cast<std::size_t>(stream_of[k]), ue_noise);
                    slot_sinr[k].push_back(s.value());
                    if (cfg.dump_sinr)
                        out.da_sinr.push_back(s.value());
                }
            }
            for (std::size_t k = 0; k < n_ue; ++k)
            {
                const auto &v = slot_sinr[k];
                if (v.empty())
                    continue;
                double se = 0.0;
                if (cfg.da_wideband_sinr)
                    se = da_rate(cfg.frame, reuse, std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
                else
                    for (double s : v)
                        se += da_rate(cfg.frame, reuse, s) / static_cast<double>(v.size());
                se_sum[k] += se;
                ++served_slots[k];
            }
        }

        for (std::size_t k = 0; k < n_ue; ++k)
        {
            if (!observed(dep.ue_sector[k]))
                continue;
            UeRecord r;
            r.ue = k;
            r.sector = dep.ue_sector[k];
            r.server = assoc.ue_server[k];
            r.da_los = bs_ue.is_los(k, layout_.site_of(r.server));
            r.scheduled = ever_trained[k] != 0;
            r.da_rate = se_sum[k] / static_cast<double>(slots);
            hash = fnv(hash, r.da_rate);
            out.ues.push_back(r);
        }
        out.sinr_hash = hash;
        return out;
    }

} // namespace sbh
