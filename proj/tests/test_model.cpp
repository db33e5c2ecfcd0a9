// SPDX-License-Identifier: Apache-2.0
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

#include "cwpcn/model.hpp"

#include "doctest.h"

#include <cmath>
#include <set>

using namespace cwpcn;

TEST_CASE("dBm conversion")
{
    CHECK(dbm_to_watt(-60.0) == doctest::Approx(1e-9).epsilon(1e-12));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(watt_to_dbm(dbm_to_watt(-73.5)) == doctest::Approx(-73.5).epsilon(1e-12));
}

TEST_CASE("free-space path loss")
{
    // 4 (c / (4 pi d f))^3 evaluated offline
    CHECK(pathloss_gain(6.0, 915e6, 4.0, 3.0) == doctest::Approx(3.289100396353892e-07).epsilon(1e-12));
    CHECK(pathloss_gain(200.0, 915e6, 4.0, 3.0) == doctest::Approx(8.880571070155515e-12).epsilon(1e-12));
    CHECK_THROWS_AS(pathloss_gain(0.0, 915e6, 4.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(pathloss_gain(-1.0, 915e6, 4.0, 3.0), std::domain_error);
}

TEST_CASE("parameter validation")
{
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    auto bad = [](auto mutate) {
        SystemParams q;
        mutate(q);
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    };
    bad([](SystemParams &q) { q.harvest_efficiency = 1.5; });
    bad([](SystemParams &q) { q.noise_power = 0.0; });
    bad([](SystemParams &q) { q.antennas = 0; });
    bad([](SystemParams &q) { q.num_wds = 0; });
    bad([](SystemParams &q) { q.itc_threshold = -1.0; });
    bad([](SystemParams &q) { q.hap_tx_power = -1.0; });
    bad([](SystemParams &q) { q.ce_duration = 1.0; });
    bad([](SystemParams &q) { q.circuit_energy = {1.0, 2.0}; });
    CHECK(p.circuit(3) == 0.0);
    CHECK(p.battery0(3) == 0.0);
}

TEST_CASE("scenario layouts")
{
    const auto c1 = layout_for(ScenarioCase::Case1);
    CHECK(c1.pt.x == 0.0);
    CHECK(c1.pr.x == 200.0);
    CHECK(c1.hap.x == 202.0);
    CHECK(layout_for(ScenarioCase::Case2).hap.x == 100.0);
    CHECK(layout_for(ScenarioCase::Case3).hap.x == 30.0);
    CHECK(scenario_from_string("2") == ScenarioCase::Case2);
    CHECK(to_string(ScenarioCase::Case3) == "3");
    CHECK_THROWS(scenario_from_string("7"));
}

TEST_CASE("geometry: cluster disc, determinism, cluster-head rules")
{
    for (auto c : {ScenarioCase::Case1, ScenarioCase::Case2, ScenarioCase::Case3})
        for (std::uint64_t seed = 1; seed < 20; ++seed)
        {
            const auto g = build_geometry(c, seed, 15, 3.0, 6.0);
            CHECK(g.num_wds() == 15);
            CHECK(distance(g.hap, g.cluster_center) == doctest::Approx(6.0));
            // the center sits off the PT-PR axis
            CHECK(g.cluster_center.x == doctest::Approx(g.hap.x));
            for (const auto &w : g.wd)
                CHECK(distance(w, g.cluster_center) <= 3.0 + 1e-12);
            const int ch = select_cluster_head(g, ChRule::ClosestToCenter);
            CHECK(ch == g.ch_index);
            for (const auto &w : g.wd)
                CHECK(distance(g.wd[ch], g.cluster_center) <= distance(w, g.cluster_center));
            const int chh = select_cluster_head(g, ChRule::ClosestToHap);
            for (const auto &w : g.wd)
                CHECK(distance(g.wd[chh], g.hap) <= distance(w, g.hap));
        }
    const auto a = build_geometry(ScenarioCase::Case1, 7, 10, 3.0, 6.0);
    const auto b = build_geometry(ScenarioCase::Case1, 7, 10, 3.0, 6.0);
    const auto c = build_geometry(ScenarioCase::Case1, 8, 10, 3.0, 6.0);
    for (int i = 0; i < 10; ++i)
    {
        CHECK(a.wd[i].x == b.wd[i].x);
        CHECK(a.wd[i].y == b.wd[i].y);
    }
    CHECK(a.wd[0].x != c.wd[0].x);
}

TEST_CASE("rng streams are deterministic and independent")
{
    Rng a(5, 1), b(5, 1), c(5, 2);
    for (int i = 0; i < 10; ++i)
    {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x != c.uniform());
    }
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("complex normal variance")
{
    Rng r(11, 3);
    const int n = 200000;
    double s = 0.0, re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const cplx z = r.complex_normal(2.5);
        s += std::norm(z);
        re += z.real() * z.real();
        im += z.imag() * z.imag();
    }
    CHECK(s / n == doctest::Approx(2.5).epsilon(0.01));
    CHECK(re / n == doctest::Approx(1.25).epsilon(0.02));
    CHECK(im / n == doctest::Approx(1.25).epsilon(0.02));
}

TEST_CASE("fading statistics follow the path loss")
{
    SystemParams p;
    p.num_wds = 4;
    const auto geo = build_geometry(ScenarioCase::Case1, 3, p.num_wds, 3.0, 6.0);
    Rng rng(9, 9);
    const int draws = 20000;
    std::vector<double> mean_a(4, 0.0), mean_lr(4, 0.0);
    double mean_b = 0.0, mean_lth = 0.0;
    for (int k = 0; k < draws; ++k)
    {
        const auto d = sample_fading(geo, p, rng);
        for (int i = 0; i < 4; ++i)
        {
            mean_a[i] += d.a[i].squaredNorm() / draws;
            mean_lr[i] += std::norm(d.l_r[i]) / draws;
        }
        mean_b += d.b.squaredNorm() / draws;
        mean_lth += std::norm(d.l_th) / draws;
        CHECK(d.c(1, 2) == d.c(2, 1));
        CHECK(d.c(0, 0) == cplx(0.0, 0.0));
    }
    for (int i = 0; i < 4; ++i)
    {
        const double pl = pathloss_gain(distance(geo.hap, geo.wd[i]), p);
        CHECK(mean_a[i] == doctest::Approx(p.antennas * pl).epsilon(0.03));
        CHECK(mean_lr[i] == doctest::Approx(pathloss_gain(distance(geo.pr, geo.wd[i]), p)).epsilon(0.05));
    }
    CHECK(mean_b == doctest::Approx(p.antennas * pathloss_gain(distance(geo.hap, geo.pr), p)).epsilon(0.03));
    CHECK(mean_lth == doctest::Approx(pathloss_gain(distance(geo.hap, geo.pt), p)).epsilon(0.05));
}

TEST_CASE("total-power antenna variance splits the path loss across antennas")
{
    SystemParams p;
    p.num_wds = 1;
    p.antenna_variance = AntennaVariance::TotalPower;
    const auto geo = build_geometry(ScenarioCase::Case1, 3, 1, 3.0, 6.0);
    Rng rng(1, 1);
    double m = 0.0;
    for (int k = 0; k < 20000; ++k)
        m += sample_fading(geo, p, rng).a[0].squaredNorm() / 20000;
    CHECK(m == doctest::Approx(pathloss_gain(distance(geo.hap, geo.wd[0]), p)).epsilon(0.03));
}

TEST_CASE("realization relabels the cluster head to label 0")
{
    SystemParams p;
    p.num_wds = 5;
    const auto geo = build_geometry(ScenarioCase::Case2, 4, 5, 3.0, 6.0);
    Rng rng(4, 4);
    const auto d = sample_fading(geo, p, rng);
    for (int chi = 0; chi < 5; ++chi)
    {
        const auto ch = realize(d, chi);
        CHECK(ch.wd_index[0] == chi);
        std::set<int> seen(ch.wd_index.begin(), ch.wd_index.end());
        CHECK(seen.size() == 5u);
        CHECK(ch.g[0] == 0.0);
        for (int l = 0; l < 5; ++l)
        {
            const int w = ch.wd_index[l];
            CHECK(ch.h[l] == doctest::Approx(d.a[w].squaredNorm()));
            CHECK(ch.h_r[l] == doctest::Approx(std::norm(d.l_r[w])));
            CHECK(ch.h_d[l] == doctest::Approx(std::norm(d.l_d[w])));
            if (l > 0)
                CHECK(ch.g[l] == doctest::Approx(std::norm(d.c(w, chi))));
            CHECK(ch.itc_gain(l, ItcConvention::ToReceiver) == ch.h_r[l]);
            CHECK(ch.itc_gain(l, ItcConvention::PaperLiteral) == ch.h_d[l]);
        }
        CHECK((ch.H_HR - ch.b * ch.b.adjoint()).norm() == 0.0);
    }
    CHECK_THROWS(realize(d, 5));
}
