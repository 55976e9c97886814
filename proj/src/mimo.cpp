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

#include "sbh/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace sbh
{
    std::string_view to_string(PilotReuse r)
    {
        switch (r)
        {
        case PilotReuse::r1:
            return "r1";
        case PilotReuse::r3:
            return "r3";
        case PilotReuse::orthogonal_backhaul:
            return "orthogonal_backhaul";
        }
        return "unknown";
    }

    double pilot_overhead(PilotReuse r) { return r == PilotReuse::r3 ? 3.0 / 14.0 : 1.0 / 14.0; }

    namespace
    {
        // Fisher-Yates with our own engine so the permutation does not depend
        // on the standard library's shuffle.
        template <typename T>
        void shuffle_in_place(std::vector<T> &v, Engine &rng)
        {
            for (std::size_t i = v.size(); i > 1; --i)
            {
                const auto j = std::min(i - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(i)));
                std::swap(v[i - 1], v[j]);
            }
        }
    } // namespace

    PilotPlan plan_pilots(PilotReuse reuse, const std::vector<std::vector<std::size_t>> &served,
                          std::size_t sectors_per_site, std::size_t codebook, Engine &rng, std::size_t capacity)
    {
        if (codebook == 0)
            throw std::invalid_argument("pilot codebook must not be empty");
        if (capacity == 0)
            capacity = codebook;
        const std::size_t n = served.size();
        const std::size_t n_pilots = std::max(capacity, codebook);

        PilotPlan plan;
        plan.reuse = reuse;
        plan.codebook = codebook;
        plan.overhead = pilot_overhead(reuse);
        plan.trained.resize(n);
        plan.pilot.resize(n);
        plan.untrained.resize(n);
        plan.contamination.resize(n);
        plan.owner.assign(n, std::vector<std::size_t>(n_pilots, kNoNode));

        for (std::size_t i = 0; i < n; ++i)
        {
            std::vector<std::size_t> nodes = served[i];
            if (nodes.size() > capacity)
            {
                shuffle_in_place(nodes, rng);
                plan.untrained[i].assign(nodes.begin() + static_cast<std::ptrdiff_t>(capacity), nodes.end());
                nodes.resize(capacity);
                std::sort(nodes.begin(), nodes.end());
                std::sort(plan.untrained[i].begin(), plan.untrained[i].end());
            }
            std::vector<std::size_t> perm(n_pilots);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            shuffle_in_place(perm, rng);
            plan.trained[i] = nodes;
            plan.pilot[i].resize(nodes.size());
            for (std::size_t j = 0; j < nodes.size(); ++j)
            {
                plan.pilot[i][j] = perm[j];
                plan.owner[i][perm[j]] = nodes[j];
            }
        }

        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                if (k == i)
                    continue;
                if (reuse == PilotReuse::r1 ||
                    (reuse == PilotReuse::r3 && k % sectors_per_site == i % sectors_per_site))
                    plan.contamination[i].push_back(k);
            }
        }
        return plan;
    }

    EstimatedChannels ls_estimate(const CMatrix &own, std::span<const CMatrix> contamination, double ul_power,
                                  double noise_var, Engine &rng)
    {
        if (!(ul_power > 0.0))
            throw std::invalid_argument("uplink pilot power must be positive");
        EstimatedChannels est;
        est.h_hat = own;
        for (const auto &c : contamination)
            est.h_hat += c;
        est.noise_variance = noise_var / ul_power;
        if (est.noise_variance > 0.0)
        {
            const double s = std::sqrt(est.noise_variance);
            for (Eigen::Index c = 0; c < est.h_hat.cols(); ++c)
                for (Eigen::Index r = 0; r < est.h_hat.rows(); ++r)
                    est.h_hat(r, c) += s * rng.complex_normal();
        }
        return est;
    }

    std::string_view to_string(PowerNormalization n)
    {
        return n == PowerNormalization::equal_stream_power ? "equal_stream_power" : "inverse_gain";
    }

    PowerNormalization power_normalization_from_string(std::string_view s)
    {
        if (s == "equal_stream_power")
            return PowerNormalization::equal_stream_power;
        if (s == "inverse_gain")
            return PowerNormalization::inverse_gain;
        throw std::invalid_argument("unknown power normalization: " + std::string(s));
    }

    PrecodeResult zf_precode(const CMatrix &h_hat, double total_power, PowerNormalization norm,
                             double condition_limit)
    {
        const Eigen::Index m = h_hat.rows();
        const Eigen::Index n = h_hat.cols();
        PrecodeResult out;
        out.total_power = total_power;
        if (n == 0)
        {
            out.zf.resize(m, 0);
            out.weights.resize(m, 0);
            out.power.resize(0);
            return out;
        }
        if (n > m)
            throw SingularChannelError("more streams than antennas");

        const CMatrix gram = h_hat.adjoint() * h_hat;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        out.condition_number = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
        if (!(out.condition_number <= condition_limit))
            throw SingularChannelError("ill-conditioned Gram matrix");

        out.zf = h_hat * gram.llt().solve(CMatrix::Identity(n, n));
        const Eigen::VectorXd norms = out.zf.colwise().norm().transpose();
        out.weights = out.zf * norms.cwiseInverse().asDiagonal();

        out.power.resize(n);
        if (norm == PowerNormalization::equal_stream_power)
        {
            out.power.setConstant(total_power / static_cast<double>(n));
        }
        else
        {
            const Eigen::VectorXd sq = norms.cwiseAbs2();
            out.power = total_power * sq / sq.sum();
        }
        return out;
    }

    double interference_from(const CVector &h, const CMatrix &effective_weights, std::size_t exclude)
    {
        const Eigen::RowVectorXcd g = h.adjoint() * effective_weights;
        double total = 0.0;
        for (Eigen::Index j = 0; j < g.size(); ++j)
            if (static_cast<std::size_t>(j) != exclude)
                total += std::norm(g(j));
        return total;
    }

    StreamSinr downlink_sinr(std::span<const CVector> channels, std::span<const CMatrix> effective,
                             std::size_t serving, std::size_t stream, double noise_power)
    {
        StreamSinr s;
        s.noise = noise_power;
        for (std::size_t i = 0; i < channels.size(); ++i)
        {
            if (channels[i].size() == 0 || effective[i].cols() == 0)
                continue;
            if (i == serving)
            {
                const Eigen::RowVectorXcd g = channels[i].adjoint() * effective[i];
                for (Eigen::Index j = 0; j < g.size(); ++j)
                {
                    if (static_cast<std::size_t>(j) == stream)
                        s.signal = std::norm(g(j));
                    else
                        s.intra += std::norm(g(j));
                }
            }
            else
            {
                s.inter += interference_from(channels[i], effective[i]);
            }
        }
        return s;
    }

    double access_sinr(double serving_power, double serving_gain, std::span<const double> interferer_gains,
                       std::span<const double> interferer_powers, double noise_power)
    {
        double interference = 0.0;
        for (std::size_t j = 0; j < interferer_gains.size(); ++j)
            interference += interferer_powers[j] * interferer_gains[j];
        return serving_power * serving_gain / (interference + noise_power);
    }

} // namespace sbh
