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

#pragma once

#include "cwpcn/harness.hpp"

#include <random>

namespace testutil {

using namespace cwpcn;

inline ChannelRealization make_instance(std::uint64_t seed, const SystemParams &p,
                                        ScenarioCase c = ScenarioCase::Case1, ChRule rule = ChRule::ClosestToCenter)
{
    const auto geo = build_geometry(c, seed, p.num_wds, 3.0, 6.0);
    Rng rng(seed, 99);
    const auto draw = sample_fading(geo, p, rng);
    return realize(draw, select_cluster_head(geo, rule));
}

inline SystemParams small_params(int antennas, int wds)
{
    SystemParams p;
    p.antennas = antennas;
    p.num_wds = wds;
    return p;
}

// Random allocation satisfying every P1 constraint: powers are scaled down
// to the binding energy and interference caps.
inline ResourceAllocation random_feasible(const ChannelRealization &ch, const SystemParams &p, std::mt19937_64 &g)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int n = ch.num_wds, M = ch.antennas;
    auto a = ResourceAllocation::zeros(n, M);
    double total = 0.0;
    a.tau1 = u(g);
    total += a.tau1;
    for (int i = 0; i < n; ++i)
    {
        if (i > 0)
            total += a.tau2[i] = u(g);
        total += a.tau3[i] = u(g);
    }
    const double scale = 0.999 * (1.0 - p.ce_duration) / total;
    a.tau1 *= scale;
    for (int i = 0; i < n; ++i)
    {
        a.tau2[i] *= scale;
        a.tau3[i] *= scale;
    }

    std::normal_distribution<double> nd;
    cmat G(M, M);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c)
            G(r, c) = cplx(nd(g), nd(g));
    cmat Q = G * G.adjoint();
    Q *= p.hap_tx_power * u(g) / Q.trace().real();
    const double itf = (ch.b.adjoint() * Q * ch.b)(0, 0).real();
    if (itf > p.itc_threshold)
        Q *= 0.999 * p.itc_threshold / itf;
    a.Q = Q;

    const auto H = harvested_energy(a.Q, a.tau1, ch, p.harvest_efficiency);
    auto battery = [&](int i) {
        return battery_level(p.battery0(ch.wd_index[i]), H[i], p.battery_cap) - p.circuit(ch.wd_index[i]);
    };
    auto gain = [&](int i) { return ch.itc_gain(i, p.itc_convention); };
    for (int i = 1; i < n; ++i)
    {
        const double cap = std::min(u(g) * battery(i) / a.tau2[i], p.itc_threshold / gain(i));
        a.p2[i] = 0.999 * std::max(cap, 0.0);
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    double ws = 0.0;
    for (int i = 0; i < n; ++i)
        ws += w[i] = u(g);
    for (int i = 0; i < n; ++i)
    {
        const double cap = std::min(w[i] / ws * u(g) * battery(0) / a.tau3[i], p.itc_threshold / gain(0));
        a.p3[i] = 0.999 * std::max(cap, 0.0);
    }
    return a;
}

struct Instance
{
    SystemParams params;
    ChannelRealization ch;
};

// Random case, I_max in [-75, -40] dBm and P_H in [0.5, 5] W.
inline Instance random_instance(std::uint64_t seed, int antennas, int wds)
{
    std::mt19937_64 g(mix_seed(seed, 0x74657374));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance in;
    in.params = small_params(antennas, wds);
    in.params.itc_threshold = dbm_to_watt(-75.0 + 35.0 * u(g));
    in.params.hap_tx_power = 0.5 + 4.5 * u(g);
    const ScenarioCase cases[] = {ScenarioCase::Case1, ScenarioCase::Case2, ScenarioCase::Case3};
    const auto c = cases[g() % 3];
    in.ch = make_instance(seed, in.params, c);
    return in;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12}); }

} // namespace testutil
