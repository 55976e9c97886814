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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sbh/stats.hpp"

using namespace sbh;

TEST_CASE("nearest-rank percentiles")
{
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(nearest_rank(v, 0.0) == 1.0);
    CHECK(nearest_rank(v, 5.0) == 1.0);
    CHECK(nearest_rank(v, 10.0) == 1.0);
    CHECK(nearest_rank(v, 10.01) == 2.0);
    CHECK(nearest_rank(v, 50.0) == 5.0);
    CHECK(nearest_rank(v, 95.0) == 10.0);
    CHECK(nearest_rank(v, 100.0) == 10.0);
    const std::vector<double> one{42.0};
    CHECK(nearest_rank(one, 37.0) == 42.0);
    CHECK_THROWS_AS(nearest_rank(std::vector<double>{}, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_rank(v, 101.0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_rank(v, -1.0), std::invalid_argument);
}

TEST_CASE("CDF summary")
{
    Engine rng(3);
    std::vector<double> x;
    for (int i = 0; i < 5000; ++i)
        x.push_back(rng.normal());
    const CdfSummary c(x);
    CHECK(std::is_sorted(c.sorted().begin(), c.sorted().end()));
    double prev = 0.0;
    for (double t = -4.0; t <= 4.0; t += 0.05)
    {
        CHECK(c.cdf(t) >= prev);
        prev = c.cdf(t);
    }
    double pp = -1e300;
    for (double p = 0.0; p <= 100.0; p += 0.5)
    {
        CHECK(c.percentile(p) >= pp);
        pp = c.percentile(p);
    }
    CHECK(c.cdf(c.sorted().back()) == 1.0);
    CHECK(c.cdf(c.percentile(50.0)) >= 0.5);
    CHECK(std::abs(c.mean()) < 0.05);
}

TEST_CASE("bootstrap interval brackets the estimate and shrinks with data")
{
    Engine gen(11);
    auto make = [&](std::size_t drops) {
        std::vector<std::vector<double>> d(drops);
        for (auto &v : d)
            for (int i = 0; i < 20; ++i)
                v.push_back(gen.normal() + 0.3 * static_cast<double>(&v - d.data() == 0));
        return d;
    };
    const auto small = make(50);
    const auto big = make(200);
    Engine r1(5), r2(5);
    const BootstrapEstimate a = bootstrap_percentile(small, 50.0, 400, r1);
    const BootstrapEstimate b = bootstrap_percentile(big, 50.0, 400, r2);
    CHECK(a.lower <= a.value);
    CHECK(a.value <= a.upper);
    CHECK(b.lower <= b.value);
    CHECK(b.value <= b.upper);
    // Four times the drops: the interval should be about half as wide.
    CHECK(b.half_width() < 0.75 * a.half_width());
    CHECK(b.half_width() > 0.25 * a.half_width());

    Engine r3(5), r4(5);
    const BootstrapEstimate c = bootstrap_percentile(small, 50.0, 400, r3);
    CHECK(c.lower == a.lower);
    CHECK(c.upper == a.upper);
    const BootstrapEstimate none = bootstrap_percentile(small, 50.0, 0, r4);
    CHECK(none.lower == none.value);
    CHECK(none.upper == none.value);
}

TEST_CASE("unimodality with tolerance")
{
    const std::vector<double> zero(6, 0.0);
    CHECK(is_unimodal(std::vector<double>{0, 1, 3, 5, 4, 2, 0}, std::vector<double>(7, 0.0)));
    CHECK_FALSE(is_unimodal(std::vector<double>{0, 3, 1, 3, 0, 0}, zero));
    // A dip inside the tolerance is flat.
    CHECK(is_unimodal(std::vector<double>{0, 3, 2.9, 3.2, 1, 0}, std::vector<double>(6, 0.2)));
    CHECK(is_unimodal(std::vector<double>{1, 2, 3, 4, 5, 6}, zero));
    CHECK(is_unimodal(std::vector<double>{2, 2, 2, 2, 2, 2}, zero));
}

TEST_CASE("argmax ties go to the lowest index")
{
    CHECK(argmax(std::vector<double>{1, 5, 2, 5}) == 1);
    CHECK(argmax(std::vector<double>{7}) == 0);
    CHECK(argmax(std::vector<double>{0, 0, 0}) == 0);
    CHECK_THROWS(argmax(std::vector<double>{}));
}
