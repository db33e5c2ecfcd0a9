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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cwpcn {

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

double SystemParams::circuit(int wd) const
{
    return circuit_energy.empty() ? 0.0 : circuit_energy.at(static_cast<std::size_t>(wd));
}

double SystemParams::battery0(int wd) const
{
    return battery_init.empty() ? 0.0 : battery_init.at(static_cast<std::size_t>(wd));
}

void SystemParams::validate() const
{
    auto fail = [](const std::string &what) { throw std::invalid_argument("SystemParams: " + what); };
    if (!(noise_power > 0.0))
        fail("noise_power must be > 0");
    if (!(harvest_efficiency > 0.0 && harvest_efficiency <= 1.0))
        fail("harvest_efficiency must lie in (0, 1]");
    if (!(primary_tx_power >= 0.0))
        fail("primary_tx_power must be >= 0");
    if (!(hap_tx_power >= 0.0))
        fail("hap_tx_power must be >= 0");
    if (!(itc_threshold >= 0.0))
        fail("itc_threshold must be >= 0");
    if (!(ce_duration >= 0.0 && ce_duration < 1.0))
        fail("ce_duration must lie in [0, 1)");
    if (antennas < 1)
        fail("antennas must be >= 1");
    if (num_wds < 1)
        fail("num_wds must be >= 1");
    if (!circuit_energy.empty() && static_cast<int>(circuit_energy.size()) != num_wds)
        fail("circuit_energy must be empty or have num_wds entries");
    if (!battery_init.empty() && static_cast<int>(battery_init.size()) != num_wds)
        fail("battery_init must be empty or have num_wds entries");
    for (double e : circuit_energy)
        if (!(e >= 0.0))
            fail("circuit_energy entries must be >= 0");
    for (double e : battery_init)
        if (!(e >= 0.0))
            fail("battery_init entries must be >= 0");
    if (!(battery_cap >= 0.0))
        fail("battery_cap must be >= 0");
    if (!(carrier_freq > 0.0))
        fail("carrier_freq must be > 0");
    if (!(antenna_gain > 0.0))
        fail("antenna_gain must be > 0");
    if (!(pathloss_exp >= 0.0))
        fail("pathloss_exp must be >= 0");
}

double pathloss_gain(double distance, double carrier_freq, double antenna_gain, double pathloss_exp)
{
    if (!(distance > 0.0))
        throw std::domain_error("pathloss_gain: distance must be > 0");
    if (!(carrier_freq > 0.0))
        throw std::domain_error("pathloss_gain: carrier frequency must be > 0");
    if (!(antenna_gain > 0.0))
        throw std::domain_error("pathloss_gain: antenna gain must be > 0");
    const double ratio = kSpeedOfLight / (4.0 * std::numbers::pi * distance * carrier_freq);
    return antenna_gain * std::pow(ratio, pathloss_exp);
}

double pathloss_gain(double distance, const SystemParams &params)
{
    return pathloss_gain(distance, params.carrier_freq, params.antenna_gain, params.pathloss_exp);
}

double distance(const Vec2 &a, const Vec2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string to_string(ScenarioCase c)
{
    switch (c)
    {
    case ScenarioCase::Case1: return "1";
    case ScenarioCase::Case2: return "2";
    case ScenarioCase::Case3: return "3";
    case ScenarioCase::Custom: return "custom";
    }
    return "custom";
}

ScenarioCase scenario_from_string(const std::string &s)
{
    if (s == "1" || s == "case1")
        return ScenarioCase::Case1;
    if (s == "2" || s == "case2")
        return ScenarioCase::Case2;
    if (s == "3" || s == "case3")
        return ScenarioCase::Case3;
    if (s == "custom")
        return ScenarioCase::Custom;
    throw std::invalid_argument("unknown scenario case: " + s);
}

PrimaryLayout layout_for(ScenarioCase c)
{
    const Vec2 pt{0.0, 0.0};
    const Vec2 pr{200.0, 0.0};
    switch (c)
    {
    case ScenarioCase::Case1: return {pt, pr, {202.0, 0.0}};
    case ScenarioCase::Case2: return {pt, pr, {100.0, 0.0}};
    case ScenarioCase::Case3: return {pt, pr, {30.0, 0.0}};
    case ScenarioCase::Custom: break;
    }
    throw std::invalid_argument("layout_for: custom scenarios need an explicit layout");
}

void NetworkGeometry::validate() const
{
    if (wd.empty())
        throw std::invalid_argument("NetworkGeometry: no WDs");
    if (ch_index < 0 || ch_index >= num_wds())
        throw std::invalid_argument("NetworkGeometry: ch_index out of range");
    auto positive = [](double d, const char *what) {
        if (!(d > 0.0))
            throw std::invalid_argument(std::string("NetworkGeometry: zero distance ") + what);
    };
    positive(distance(hap, pr), "HAP-PR");
    positive(distance(pt, hap), "PT-HAP");
    for (std::size_t i = 0; i < wd.size(); ++i)
    {
        positive(distance(hap, wd[i]), "HAP-WD");
        positive(distance(pr, wd[i]), "PR-WD");
        positive(distance(pt, wd[i]), "PT-WD");
        for (std::size_t j = i + 1; j < wd.size(); ++j)
            positive(distance(wd[i], wd[j]), "WD-WD");
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 finalizer over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

double Rng::uniform() { return uniform_(engine_); }

double Rng::normal() { return normal_(engine_); }

cplx Rng::complex_normal(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

NetworkGeometry build_geometry(const PrimaryLayout &layout, std::uint64_t seed, int num_wds, double radius,
                               double hap_cluster_dist)
{
    if (num_wds < 1)
        throw std::invalid_argument("build_geometry: num_wds must be >= 1");
    if (!(radius > 0.0) || !(hap_cluster_dist > 0.0))
        throw std::invalid_argument("build_geometry: radius and HAP-cluster distance must be > 0");

    NetworkGeometry geo;
    geo.hap = layout.hap;
    geo.pt = layout.pt;
    geo.pr = layout.pr;

    // unit normal to the PT-PR axis
    const double ax = layout.pr.x - layout.pt.x;
    const double ay = layout.pr.y - layout.pt.y;
    const double len = std::hypot(ax, ay);
    const Vec2 normal = len > 0.0 ? Vec2{-ay / len, ax / len} : Vec2{0.0, 1.0};
    geo.cluster_center = {layout.hap.x + hap_cluster_dist * normal.x, layout.hap.y + hap_cluster_dist * normal.y};

    Rng rng(seed, 0x67656f);
    geo.wd.reserve(static_cast<std::size_t>(num_wds));
    for (int i = 0; i < num_wds; ++i)
    {
        const double r = radius * std::sqrt(rng.uniform());
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        geo.wd.push_back({geo.cluster_center.x + r * std::cos(phi), geo.cluster_center.y + r * std::sin(phi)});
    }
    geo.ch_index = select_cluster_head(geo, ChRule::ClosestToCenter);
    return geo;
}

NetworkGeometry build_geometry(ScenarioCase c, std::uint64_t seed, int num_wds, double radius, double hap_cluster_dist)
{
    return build_geometry(layout_for(c), seed, num_wds, radius, hap_cluster_dist);
}

int select_cluster_head(const NetworkGeometry &geometry, ChRule rule)
{
    if (geometry.wd.empty())
        throw std::invalid_argument("select_cluster_head: no WDs");
    const Vec2 ref = rule == ChRule::ClosestToCenter ? geometry.cluster_center : geometry.hap;
    int best = 0;
    double best_d = distance(geometry.wd[0], ref);
    for (int i = 1; i < geometry.num_wds(); ++i)
    {
        const double d = distance(geometry.wd[static_cast<std::size_t>(i)], ref);
        if (d < best_d)
        {
            best = i;
            best_d = d;
        }
    }
    return best;
}

FadingDraw sample_fading(const NetworkGeometry &geometry, const SystemParams &params, Rng &rng)
{
    const int n = geometry.num_wds();
    const int m = params.antennas;
    const double per_entry = params.antenna_variance == AntennaVariance::PerEntry ? 1.0 : 1.0 / m;
    auto gain = [&](const Vec2 &p, const Vec2 &q) { return pathloss_gain(distance(p, q), params); };

    FadingDraw d;
    d.a.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        const double var = per_entry * gain(geometry.hap, geometry.wd[i]);
        d.a[i].resize(m);
        for (int k = 0; k < m; ++k)
            d.a[i](k) = rng.complex_normal(var);
    }
    d.c = cmat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
        {
            const cplx v = rng.complex_normal(gain(geometry.wd[i], geometry.wd[j]));
            d.c(i, j) = v;
            d.c(j, i) = v;
        }
    d.b.resize(m);
    const double var_b = per_entry * gain(geometry.hap, geometry.pr);
    for (int k = 0; k < m; ++k)
        d.b(k) = rng.complex_normal(var_b);
    d.l_th = rng.complex_normal(gain(geometry.pt, geometry.hap));
    d.l_r.resize(static_cast<std::size_t>(n));
    d.l_d.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        d.l_r[i] = rng.complex_normal(gain(geometry.wd[i], geometry.pr));
        d.l_d[i] = rng.complex_normal(gain(geometry.pt, geometry.wd[i]));
    }
    return d;
}

void ChannelRealization::refresh_gains()
{
    const auto n = static_cast<std::size_t>(num_wds);
    h.assign(n, 0.0);
    g.assign(n, 0.0);
    h_r.assign(n, 0.0);
    h_d.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        h[i] = a[i].squaredNorm();
        g[i] = i == 0 ? 0.0 : std::norm(c[i]);
        h_r[i] = std::norm(l_r[i]);
        h_d[i] = std::norm(l_d[i]);
    }
    h_th = std::norm(l_th);
    H_HR = b * b.adjoint();
}

double ChannelRealization::itc_gain(int label, ItcConvention convention) const
{
    const auto i = static_cast<std::size_t>(label);
    return convention == ItcConvention::ToReceiver ? h_r[i] : h_d[i];
}

ChannelRealization realize(const FadingDraw &draw, int ch_index)
{
    const int n = static_cast<int>(draw.a.size());
    if (ch_index < 0 || ch_index >= n)
        throw std::invalid_argument("realize: ch_index out of range");

    ChannelRealization ch;
    ch.antennas = static_cast<int>(draw.b.size());
    ch.num_wds = n;
    ch.wd_index.push_back(ch_index);
    for (int i = 0; i < n; ++i)
        if (i != ch_index)
            ch.wd_index.push_back(i);

    for (int label = 0; label < n; ++label)
    {
        const int wd = ch.wd_index[label];
        ch.a.push_back(draw.a[wd]);
        ch.c.push_back(label == 0 ? cplx{0.0, 0.0} : draw.c(wd, ch_index));
        ch.l_r.push_back(draw.l_r[wd]);
        ch.l_d.push_back(draw.l_d[wd]);
    }
    ch.b = draw.b;
    ch.l_th = draw.l_th;
    ch.refresh_gains();
    return ch;
}

ChannelRealization sample_channels(const NetworkGeometry &geometry, const SystemParams &params, Rng &rng)
{
    return realize(sample_fading(geometry, params, rng), geometry.ch_index);
}

} // namespace cwpcn
