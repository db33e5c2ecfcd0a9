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

#include "cwpcn/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cwpcn {

ResourceAllocation ResourceAllocation::zeros(int num_wds, int antennas)
{
    ResourceAllocation a;
    const auto n = static_cast<std::size_t>(num_wds);
    a.tau2.assign(n, 0.0);
    a.tau3.assign(n, 0.0);
    a.p2.assign(n, 0.0);
    a.p3.assign(n, 0.0);
    a.Q = cmat::Zero(antennas, antennas);
    return a;
}

double ResourceAllocation::total_time() const
{
    double t = tau1;
    for (std::size_t i = 1; i < tau2.size(); ++i)
        t += tau2[i];
    for (double v : tau3)
        t += v;
    return t;
}

bool Constraint::satisfied(double tol) const
{
    const double r = residual();
    if (std::isnan(r))
        return false;
    if (physical)
        return r <= tol * std::abs(rhs) + 1e-24;
    return r <= tol;
}

bool ConstraintReport::feasible() const
{
    return std::all_of(items.begin(), items.end(), [&](const Constraint &c) { return c.satisfied(tolerance); });
}

std::vector<Constraint> ConstraintReport::violations() const
{
    std::vector<Constraint> out;
    for (const auto &c : items)
        if (!c.satisfied(tolerance))
            out.push_back(c);
    return out;
}

const Constraint *ConstraintReport::find(const std::string &name) const
{
    for (const auto &c : items)
        if (c.name == name)
            return &c;
    return nullptr;
}

void ConstraintReport::add(std::string name, double lhs, double rhs, bool physical)
{
    items.push_back({std::move(name), lhs, rhs, physical});
}

namespace {

std::string describe(const ConstraintReport &r)
{
    std::string msg = "infeasible allocation:";
    for (const auto &c : r.violations())
        msg += " " + c.name;
    return msg;
}

} // namespace

InfeasibleAllocation::InfeasibleAllocation(ConstraintReport report)
    : std::runtime_error(describe(report)), report_(std::move(report))
{
}

double link_rate(double tau, double power, double gain, double noise)
{
    if (tau <= 0.0 || power <= 0.0)
        return 0.0;
    return tau * std::log1p(gain * power / noise) / std::numbers::ln2;
}

double min_eigenvalue(const cmat &Q)
{
    if (Q.size() == 0)
        return 0.0;
    const cmat herm = 0.5 * (Q + Q.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::vector<double> harvested_energy(const cmat &Q, double tau1, const ChannelRealization &ch, double eta)
{
    if (tau1 < 0.0)
        throw ValidationError("harvested_energy: tau1 must be >= 0");
    const double scale = std::max(1.0, std::abs(Q.trace().real()));
    if (min_eigenvalue(Q) < -1e-10 * scale)
        throw ValidationError("harvested_energy: Q is not positive semidefinite");
    std::vector<double> out(static_cast<std::size_t>(ch.num_wds));
    for (int i = 0; i < ch.num_wds; ++i)
    {
        // tr(a a^H Q) = a^H Q a
        const double q = (ch.a[i].adjoint() * Q * ch.a[i])(0, 0).real();
        out[i] = eta * tau1 * std::max(q, 0.0);
    }
    return out;
}

double battery_level(double initial, double harvested, double cap) { return std::min(initial + harvested, cap); }

double intra_cluster_rate(double tau2, double p2, double g, double h0d, const SystemParams &params)
{
    return link_rate(tau2, p2, g, params.noise_power + h0d * params.primary_tx_power);
}

double hap_overheard_rate(double tau2, double p2, double h, double h_th, const SystemParams &params)
{
    return link_rate(tau2, p2, h, params.noise_power + h_th * params.primary_tx_power);
}

ChRates ch_rates(const std::vector<double> &tau3, const std::vector<double> &p3, double h0, double h_th,
                 const SystemParams &params)
{
    ChRates out;
    out.v3.assign(tau3.size(), 0.0);
    const double noise = params.noise_power + h_th * params.primary_tx_power;
    for (std::size_t i = 0; i < tau3.size(); ++i)
    {
        const double r = link_rate(tau3[i], p3[i], h0, noise);
        if (i == 0)
            out.r0 = r;
        else
            out.v3[i] = r;
    }
    return out;
}

double joint_cm_rate(double r2, double v2, double v3) { return std::min(r2, v2 + v3); }

InterferencePowers interference_powers(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                       const SystemParams &params)
{
    InterferencePowers out;
    out.phase1 = (ch.b.adjoint() * alloc.Q * ch.b)(0, 0).real();
    const auto n = static_cast<std::size_t>(ch.num_wds);
    out.phase2.assign(n, 0.0);
    out.phase3.assign(n, 0.0);
    const double g0 = ch.itc_gain(0, params.itc_convention);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i > 0)
            out.phase2[i] = ch.itc_gain(static_cast<int>(i), params.itc_convention) * alloc.p2[i];
        out.phase3[i] = g0 * alloc.p3[i];
    }
    return out;
}

ConstraintReport check_feasibility(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                   const SystemParams &params, double tol)
{
    ConstraintReport r;
    r.tolerance = tol;
    const int n = ch.num_wds;
    if (alloc.num_wds() != n || static_cast<int>(alloc.tau2.size()) != n || static_cast<int>(alloc.p2.size()) != n ||
        static_cast<int>(alloc.p3.size()) != n || alloc.Q.rows() != ch.antennas || alloc.Q.cols() != ch.antennas)
        throw std::invalid_argument("check_feasibility: allocation shape does not match the channels");

    r.add("tau1>=0", -alloc.tau1, 0.0, false);
    for (int i = 0; i < n; ++i)
    {
        const std::string s = std::to_string(i);
        if (i > 0)
        {
            r.add("tau2[" + s + "]>=0", -alloc.tau2[i], 0.0, false);
            r.add("p2[" + s + "]>=0", -alloc.p2[i], 0.0, true);
        }
        r.add("tau3[" + s + "]>=0", -alloc.tau3[i], 0.0, false);
        r.add("p3[" + s + "]>=0", -alloc.p3[i], 0.0, true);
    }
    r.add("time_budget", params.ce_duration + alloc.total_time(), 1.0, false);

    const double herm_err = (alloc.Q - alloc.Q.adjoint()).cwiseAbs().maxCoeff();
    const double q_scale = std::max(1.0, std::abs(alloc.Q.trace().real()));
    r.add("Q_hermitian", alloc.Q.size() ? herm_err : 0.0, 1e-12 * q_scale, true);
    r.add("Q_psd", alloc.Q.size() ? -min_eigenvalue(alloc.Q) : 0.0, 1e-10 * q_scale, true);
    r.add("hap_power", alloc.Q.trace().real(), params.hap_tx_power, true);

    std::vector<double> harvested(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        harvested[i] = params.harvest_efficiency * std::max(alloc.tau1, 0.0) *
                       std::max((ch.a[i].adjoint() * alloc.Q * ch.a[i])(0, 0).real(), 0.0);

    auto battery = [&](int label) {
        const int wd = ch.wd_index[label];
        return battery_level(params.battery0(wd), harvested[label], params.battery_cap);
    };
    for (int i = 1; i < n; ++i)
        r.add("cm_energy[" + std::to_string(i) + "]",
              alloc.tau2[i] * alloc.p2[i] + params.circuit(ch.wd_index[i]), battery(i), true);
    double ch_use = params.circuit(ch.wd_index[0]);
    for (int i = 0; i < n; ++i)
        ch_use += alloc.tau3[i] * alloc.p3[i];
    r.add("ch_energy", ch_use, battery(0), true);

    const auto itf = interference_powers(alloc, ch, params);
    r.add("itc_phase1", itf.phase1, params.itc_threshold, true);
    for (int i = 0; i < n; ++i)
    {
        if (i > 0)
            r.add("itc_phase2[" + std::to_string(i) + "]", itf.phase2[i], params.itc_threshold, true);
        r.add("itc_phase3[" + std::to_string(i) + "]", itf.phase3[i], params.itc_threshold, true);
    }
    return r;
}

ThroughputReport evaluate(const ResourceAllocation &alloc, const ChannelRealization &ch, const SystemParams &params,
                          Evaluation mode)
{
    ThroughputReport rep;
    rep.constraints = check_feasibility(alloc, ch, params);
    if (mode == Evaluation::Checked && !rep.constraints.feasible())
        throw InfeasibleAllocation(rep.constraints);

    const int n = ch.num_wds;
    rep.wd_index = ch.wd_index;
    rep.harvested.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        rep.harvested[i] = params.harvest_efficiency * std::max(alloc.tau1, 0.0) *
                           std::max((ch.a[i].adjoint() * alloc.Q * ch.a[i])(0, 0).real(), 0.0);
    rep.battery.resize(rep.harvested.size());
    for (int i = 0; i < n; ++i)
        rep.battery[i] = battery_level(params.battery0(ch.wd_index[i]), rep.harvested[i], params.battery_cap);

    const auto relay = ch_rates(alloc.tau3, alloc.p3, ch.h[0], ch.h_th, params);
    rep.rates.assign(static_cast<std::size_t>(n), 0.0);
    rep.rates[0] = relay.r0;
    for (int i = 1; i < n; ++i)
    {
        const double r2 = intra_cluster_rate(alloc.tau2[i], alloc.p2[i], ch.g[i], ch.h_d[0], params);
        const double v2 = hap_overheard_rate(alloc.tau2[i], alloc.p2[i], ch.h[i], ch.h_th, params);
        rep.rates[i] = joint_cm_rate(r2, v2, relay.v3[i]);
    }
    rep.min_rate = *std::min_element(rep.rates.begin(), rep.rates.end());
    rep.sum_rate = std::accumulate(rep.rates.begin(), rep.rates.end(), 0.0);
    rep.interference = interference_powers(alloc, ch, params);
    return rep;
}

nlohmann::json to_json(const ConstraintReport &report)
{
    nlohmann::json items = nlohmann::json::array();
    for (const auto &c : report.items)
        items.push_back({{"name", c.name},
                         {"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"residual", c.residual()},
                         {"satisfied", c.satisfied(report.tolerance)}});
    return {{"tolerance", report.tolerance}, {"feasible", report.feasible()}, {"items", items}};
}

nlohmann::json to_json(const ThroughputReport &report)
{
    return {{"wd_index", report.wd_index},
            {"rates_bps_hz", report.rates},
            {"min_rate_bps_hz", report.min_rate},
            {"sum_rate_bps_hz", report.sum_rate},
            {"harvested_energy_j", report.harvested},
            {"battery_j", report.battery},
            {"interference_w",
             {{"phase1", report.interference.phase1},
              {"phase2", report.interference.phase2},
              {"phase3", report.interference.phase3}}},
            {"constraints", to_json(report.constraints)}};
}

} // namespace cwpcn
