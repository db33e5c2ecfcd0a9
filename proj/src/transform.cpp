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

#include "cwpcn/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cwpcn {

RateCoefficients rate_coefficients(const ChannelRealization &ch, const SystemParams &params)
{
    const auto n = static_cast<std::size_t>(ch.num_wds);
    const double eta = params.harvest_efficiency;
    const double hap_noise = params.noise_power + ch.h_th * params.primary_tx_power;
    const double ch_noise = params.noise_power + ch.h_d[0] * params.primary_tx_power;
    RateCoefficients c;
    c.rho_bar.assign(n, 0.0);
    c.rho.assign(n, 0.0);
    c.phi.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        c.rho[i] = eta * ch.h[i] / hap_noise;
        if (i > 0)
            c.rho_bar[i] = eta * ch.g[i] / ch_noise;
        c.phi[i] = eta * ch.itc_gain(static_cast<int>(i), params.itc_convention);
    }
    c.rho0 = c.rho[0];
    return c;
}

TransformedPoint TransformedPoint::zeros(int num_wds, int antennas)
{
    TransformedPoint p;
    const auto n = static_cast<std::size_t>(num_wds);
    p.tau2.assign(n, 0.0);
    p.tau3.assign(n, 0.0);
    p.psi.assign(n, 0.0);
    p.theta.assign(n, 0.0);
    p.z.assign(n, 0.0);
    p.battery.assign(n, 0.0);
    p.W = cmat::Zero(antennas, antennas);
    return p;
}

double perspective_rate(double tau, double x, double rho)
{
    if (tau < 0.0 || x < 0.0 || rho < 0.0)
        throw std::domain_error("perspective_rate: arguments must be >= 0");
    if (tau == 0.0 || x == 0.0 || rho == 0.0)
        return 0.0;
    return tau * std::log1p(rho * x / tau) / std::numbers::ln2;
}

TransformedPoint to_transformed(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                const SystemParams &params)
{
    const double sbar = evaluate(alloc, ch, params, Evaluation::Unchecked).min_rate;
    return to_transformed(alloc, ch, params, sbar);
}

TransformedPoint to_transformed(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                const SystemParams &params, double sbar)
{
    const int n = ch.num_wds;
    const double eta = params.harvest_efficiency;
    TransformedPoint p = TransformedPoint::zeros(n, ch.antennas);
    p.tau1 = alloc.tau1;
    p.W = alloc.tau1 * alloc.Q;
    for (int i = 0; i < n; ++i)
    {
        if (i > 0)
        {
            p.tau2[i] = alloc.tau2[i];
            p.psi[i] = alloc.tau2[i] * alloc.p2[i] / eta;
        }
        p.tau3[i] = alloc.tau3[i];
        p.theta[i] = alloc.tau3[i] * alloc.p3[i] / eta;
        p.z[i] = std::max((ch.a[i].adjoint() * p.W * ch.a[i])(0, 0).real(), 0.0);
        p.battery[i] = battery_level(params.battery0(ch.wd_index[i]), eta * p.z[i], params.battery_cap);
    }
    p.sbar = sbar;
    return p;
}

ResourceAllocation recover_allocation(const TransformedPoint &point, const SystemParams &params)
{
    const int n = point.num_wds();
    const double eta = params.harvest_efficiency;
    ResourceAllocation a = ResourceAllocation::zeros(n, static_cast<int>(point.W.rows()));

    auto power = [&](double tau, double x, const char *what, int i) {
        if (tau > 0.0)
            return eta * x / tau;
        if (x > kZeroTimeTolerance)
            throw InconsistentPoint(std::string("recover_allocation: zero duration with positive ") + what + "[" +
                                    std::to_string(i) + "]");
        return 0.0;
    };

    a.tau1 = point.tau1;
    if (point.tau1 > 0.0)
        a.Q = point.W / point.tau1;
    else if (point.W.size() && point.W.cwiseAbs().maxCoeff() > kZeroTimeTolerance)
        throw InconsistentPoint("recover_allocation: tau1 = 0 with nonzero W");
    for (int i = 0; i < n; ++i)
    {
        if (i > 0)
        {
            a.tau2[i] = point.tau2[i];
            a.p2[i] = power(point.tau2[i], point.psi[i], "psi", i);
        }
        a.tau3[i] = point.tau3[i];
        a.p3[i] = power(point.tau3[i], point.theta[i], "theta", i);
    }
    return a;
}

std::vector<double> transformed_rates(const TransformedPoint &point, const RateCoefficients &coef)
{
    const int n = point.num_wds();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    out[0] = perspective_rate(point.tau3[0], point.theta[0], coef.rho0);
    for (int i = 1; i < n; ++i)
    {
        const double r2 = perspective_rate(point.tau2[i], point.psi[i], coef.rho_bar[i]);
        const double v = perspective_rate(point.tau2[i], point.psi[i], coef.rho[i]) +
                         perspective_rate(point.tau3[i], point.theta[i], coef.rho0);
        out[i] = std::min(r2, v);
    }
    return out;
}

ConstraintReport transformed_residuals(const TransformedPoint &p, const ChannelRealization &ch,
                                       const SystemParams &params, double tol)
{
    ConstraintReport r;
    r.tolerance = tol;
    const int n = ch.num_wds;
    const double eta = params.harvest_efficiency;
    const double imax = params.itc_threshold;
    const auto coef = rate_coefficients(ch, params);
    auto idx = [](const char *name, int i) { return std::string(name) + "[" + std::to_string(i) + "]"; };

    r.add("tau1>=0", -p.tau1, 0.0, false);
    r.add("sbar>=0", -p.sbar, 0.0, false);
    double time = params.ce_duration + p.tau1;
    for (int i = 0; i < n; ++i)
    {
        if (i > 0)
        {
            r.add(idx("tau2>=0", i), -p.tau2[i], 0.0, false);
            r.add(idx("psi>=0", i), -p.psi[i], 0.0, true);
            time += p.tau2[i];
        }
        r.add(idx("tau3>=0", i), -p.tau3[i], 0.0, false);
        r.add(idx("theta>=0", i), -p.theta[i], 0.0, true);
        time += p.tau3[i];
    }
    r.add("time_budget", time, 1.0, false);

    const double w_scale = std::max(1.0, std::abs(p.W.trace().real()));
    r.add("W_psd", p.W.size() ? -min_eigenvalue(p.W) : 0.0, 1e-10 * w_scale, true);
    r.add("hap_energy", p.W.trace().real(), p.tau1 * params.hap_tx_power, true);
    r.add("itc_phase1", (ch.b.adjoint() * p.W * ch.b)(0, 0).real(), p.tau1 * imax, true);

    for (int i = 0; i < n; ++i)
    {
        const int wd = ch.wd_index[i];
        const double trace_ai = (ch.a[i].adjoint() * p.W * ch.a[i])(0, 0).real();
        // z_i is defined by tr(A_i W); report the two-sided gap
        r.add(idx("z_definition", i), std::abs(p.z[i] - trace_ai), 1e-12 * std::max(std::abs(trace_ai), 1e-30),
              true);
        r.add(idx("battery_harvest", i), p.battery[i], params.battery0(wd) + eta * p.z[i], true);
        r.add(idx("battery_cap", i), p.battery[i], params.battery_cap, true);
    }

    for (int i = 1; i < n; ++i)
    {
        const int wd = ch.wd_index[i];
        r.add(idx("cm_energy", i), p.psi[i] + params.circuit(wd) / eta, p.battery[i] / eta, true);
        r.add(idx("itc_phase2", i), coef.phi[i] * p.psi[i], p.tau2[i] * imax, true);
    }
    double theta_sum = params.circuit(ch.wd_index[0]) / eta;
    for (int i = 0; i < n; ++i)
    {
        theta_sum += p.theta[i];
        r.add(idx("itc_phase3", i), coef.phi[0] * p.theta[i], p.tau3[i] * imax, true);
    }
    r.add("ch_energy", theta_sum, p.battery[0] / eta, true);

    r.add("rate_ch", p.sbar, perspective_rate(p.tau3[0], p.theta[0], coef.rho0), false);
    for (int i = 1; i < n; ++i)
    {
        const double r2 = perspective_rate(p.tau2[i], p.psi[i], coef.rho_bar[i]);
        const double v = perspective_rate(p.tau2[i], p.psi[i], coef.rho[i]) +
                         perspective_rate(p.tau3[i], p.theta[i], coef.rho0);
        r.add(idx("rate_relay", i), p.sbar, v, false);
        r.add(idx("rate_intra", i), p.sbar, r2, false);
    }
    return r;
}

nlohmann::json to_json(const TransformedPoint &p)
{
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index i = 0; i < p.W.rows(); ++i)
    {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < p.W.cols(); ++j)
            row.push_back({p.W(i, j).real(), p.W(i, j).imag()});
        w.push_back(row);
    }
    return {{"tau1", p.tau1}, {"tau2", p.tau2}, {"tau3", p.tau3},   {"psi", p.psi},
            {"theta", p.theta}, {"z", p.z},     {"W", w},           {"sbar", p.sbar},
            {"battery", p.battery}};
}

} // namespace cwpcn
