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

// Grid-search references for single-antenna instances with one or two WDs.
// Deliberately shares nothing with the barrier path beyond the channel
// container: coefficients, caps and rates are recomputed here.

#include "cwpcn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cwpcn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Setup
{
    double T = 1.0;     // time left after channel estimation
    double wcap = 0.0;  // HAP energy per unit tau1
    double eta = 0.5;
    double imax = 0.0;
    double hap_noise = 1.0;
    double ch_noise = 1.0;
    double emax = kInf;
    double gain_a[2] = {0.0, 0.0}; // |a_i|^2
    double e0[2] = {0.0, 0.0};
    double circ[2] = {0.0, 0.0};
    double itc[2] = {0.0, 0.0};
    double h[2] = {0.0, 0.0};
    double g1 = 0.0;
};

Setup make_setup(const ChannelRealization &ch, const SystemParams &p, int grid)
{
    if (ch.antennas != 1 || ch.num_wds < 1 || ch.num_wds > 2)
        throw std::invalid_argument("oracle: needs M = 1 and N <= 2");
    if (grid < 100)
        throw std::invalid_argument("oracle: grid must have >= 100 points per axis");
    Setup s;
    s.T = 1.0 - p.ce_duration;
    const double b2 = std::norm(ch.b(0));
    s.wcap = b2 > 0.0 ? std::min(p.hap_tx_power, p.itc_threshold / b2) : p.hap_tx_power;
    s.eta = p.harvest_efficiency;
    s.imax = p.itc_threshold;
    const double lth = std::norm(ch.l_th);
    s.hap_noise = p.noise_power + lth * p.primary_tx_power;
    s.emax = p.battery_cap;
    for (int i = 0; i < ch.num_wds; ++i)
    {
        s.gain_a[i] = std::norm(ch.a[i](0));
        s.e0[i] = p.battery0(ch.wd_index[i]);
        s.circ[i] = p.circuit(ch.wd_index[i]);
        s.itc[i] = p.itc_convention == ItcConvention::ToReceiver ? std::norm(ch.l_r[i]) : std::norm(ch.l_d[i]);
        s.h[i] = s.gain_a[i];
    }
    s.ch_noise = p.noise_power + std::norm(ch.l_d[0]) * p.primary_tx_power;
    if (ch.num_wds == 2)
        s.g1 = std::norm(ch.c[1]);
    return s;
}

// scaled energy available to WD i given W = w
double pool(const Setup &s, int i, double w)
{
    const double e = std::min(s.e0[i] + s.eta * s.gain_a[i] * w, s.emax);
    return (e - s.circ[i]) / s.eta;
}

double itc_cap(const Setup &s, int i, double tau)
{
    return s.itc[i] > 0.0 ? tau * s.imax / (s.eta * s.itc[i]) : kInf;
}

double rate(double tau, double x, double rho)
{
    if (tau <= 0.0 || x <= 0.0)
        return 0.0;
    return tau * std::log2(1.0 + rho * x / tau);
}

// x with tau log2(1 + rho x / tau) = target
double needed(double tau, double target, double rho)
{
    if (target <= 0.0)
        return 0.0;
    if (tau <= 0.0 || rho <= 0.0)
        return kInf;
    return tau * std::expm1(target * std::numbers::ln2 / tau) / rho;
}

double single_wd(const Setup &s, double rho, int grid)
{
    if (pool(s, 0, s.T * s.wcap) < 0.0)
        return 0.0;
    double best = 0.0;
    for (int i = 0; i <= grid; ++i)
    {
        const double tau1 = s.T * i / grid;
        const double tau3 = s.T - tau1;
        const double b = pool(s, 0, tau1 * s.wcap);
        if (b < 0.0)
            continue;
        best = std::max(best, rate(tau3, std::min(b, itc_cap(s, 0, tau3)), rho));
    }
    return best;
}

// feasibility of rate S for the CH + one CM, scanning (tau1, tau2) and
// minimizing the CH's energy over its split with a convex search
bool cc_feasible(const Setup &s, double S, double rho0, double rho1, double rho_bar1, int grid)
{
    for (int i = 1; i < grid; ++i)
    {
        const double tau1 = s.T * i / grid;
        const double w = tau1 * s.wcap;
        const double b0 = pool(s, 0, w), b1 = pool(s, 1, w);
        if (b0 < 0.0 || b1 < 0.0)
            continue;
        const double rem1 = s.T - tau1;
        for (int j = 1; j < grid; ++j)
        {
            const double tau2 = rem1 * j / grid;
            const double psi = std::min(b1, itc_cap(s, 1, tau2));
            if (psi < needed(tau2, S, rho_bar1))
                continue;
            const double need3 = std::max(0.0, S - rate(tau2, psi, rho1));
            const double rem = rem1 - tau2;
            const int hi_j = need3 > 0.0 ? grid - 1 : grid;

            auto theta0 = [&](int k) { return needed(rem * k / grid, S, rho0); };
            auto theta1 = [&](int k) { return needed(rem - rem * k / grid, need3, rho0); };
            auto f = [&](int k) { return theta0(k) + theta1(k); };
            auto ok0 = [&](int k) { return theta0(k) <= itc_cap(s, 0, rem * k / grid); };
            auto ok1 = [&](int k) { return theta1(k) <= itc_cap(s, 0, rem - rem * k / grid); };

            // ok0 holds on a suffix, ok1 on a prefix
            if (!ok0(hi_j) || !ok1(1))
                continue;
            int lo = 1, hi = hi_j;
            while (lo < hi)
            {
                const int m = (lo + hi) / 2;
                if (ok0(m))
                    hi = m;
                else
                    lo = m + 1;
            }
            const int a = lo;
            lo = 1;
            hi = hi_j;
            while (lo < hi)
            {
                const int m = (lo + hi + 1) / 2;
                if (ok1(m))
                    lo = m;
                else
                    hi = m - 1;
            }
            const int b = lo;
            if (a > b)
                continue;

            int l = a, r = b;
            while (r - l > 2)
            {
                const int m1 = l + (r - l) / 3, m2 = r - (r - l) / 3;
                if (f(m1) <= f(m2))
                    r = m2;
                else
                    l = m1;
            }
            double fmin = kInf;
            for (int k = l; k <= r; ++k)
                fmin = std::min(fmin, f(k));
            if (fmin <= b0)
                return true;
        }
    }
    return false;
}

} // namespace

double brute_force_oracle(const ChannelRealization &ch, const SystemParams &params, int grid)
{
    const Setup s = make_setup(ch, params, grid);
    if (s.T <= 0.0)
        return 0.0;
    const double rho0 = s.eta * s.h[0] / s.hap_noise;
    if (ch.num_wds == 1)
        return single_wd(s, rho0, grid);

    const double rho1 = s.eta * s.h[1] / s.hap_noise;
    const double rho_bar1 = s.eta * s.g1 / s.ch_noise;
    const double wmax = s.T * s.wcap;
    if (pool(s, 0, wmax) < 0.0 || pool(s, 1, wmax) < 0.0)
        return 0.0;
    double hi = std::min(std::log2(1.0 + rho0 * std::max(pool(s, 0, wmax), 0.0)),
                         std::log2(1.0 + rho_bar1 * std::max(pool(s, 1, wmax), 0.0)));
    double lo = 0.0;
    if (!(hi > 0.0))
        return 0.0;
    hi *= 1.0001;
    while (hi - lo > 1e-5 * hi)
    {
        const double mid = 0.5 * (lo + hi);
        if (cc_feasible(s, mid, rho0, rho1, rho_bar1, grid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double brute_force_oracle_independent(const ChannelRealization &ch, const SystemParams &params, int grid)
{
    const Setup s = make_setup(ch, params, grid);
    if (s.T <= 0.0)
        return 0.0;
    const double rho0 = s.eta * s.h[0] / s.hap_noise;
    if (ch.num_wds == 1)
        return single_wd(s, rho0, grid);
    const double rho1 = s.eta * s.h[1] / s.hap_noise;
    double best = 0.0;
    for (int i = 0; i <= grid; ++i)
    {
        const double tau1 = s.T * i / grid;
        const double w = tau1 * s.wcap;
        const double b0 = pool(s, 0, w), b1 = pool(s, 1, w);
        if (b0 < 0.0 || b1 < 0.0)
            continue;
        const double rem = s.T - tau1;
        for (int j = 0; j <= grid; ++j)
        {
            const double t0 = rem * j / grid, t1 = rem - t0;
            const double r0 = rate(t0, std::min(b0, itc_cap(s, 0, t0)), rho0);
            const double r1 = rate(t1, std::min(b1, itc_cap(s, 1, t1)), rho1);
            best = std::max(best, std::min(r0, r1));
        }
    }
    return best;
}

} // namespace cwpcn
