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

#include "cwpcn/scheme_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cwpcn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dotv(const std::vector<double> &w, const cmat &X)
{
    const auto p = barrier::params_from_hermitian(X);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += w[i] * p[i];
    return s;
}

cmat orthonormal_basis(const cmat &cols)
{
    if (cols.cols() == 0)
        return cmat(cols.rows(), 0);
    Eigen::ColPivHouseholderQR<cmat> qr(cols);
    qr.setThreshold(1e-10);
    const auto r = qr.rank();
    cmat q = qr.householderQ();
    return q.leftCols(r);
}

} // namespace

SchemeLayout SchemeLayout::cooperative(int num_wds)
{
    SchemeLayout l;
    l.direct.assign(static_cast<std::size_t>(num_wds), false);
    if (num_wds > 0)
        l.direct[0] = true;
    return l;
}

SchemeLayout SchemeLayout::independent(int num_wds)
{
    SchemeLayout l;
    l.direct.assign(static_cast<std::size_t>(num_wds), true);
    return l;
}

bool SchemeLayout::has_relaying() const
{
    return std::find(direct.begin(), direct.end(), false) != direct.end();
}

std::vector<Slot> SchemeLayout::slots() const
{
    std::vector<Slot> s;
    for (int i = 0; i < num_wds(); ++i)
    {
        if (direct[i])
            s.push_back({SlotRole::Direct, i, i});
        else
        {
            s.push_back({SlotRole::Intra, i, i});
            s.push_back({SlotRole::Relay, i, 0});
        }
    }
    return s;
}

double SchemeAllocation::total_time() const
{
    double t = tau1;
    for (double x : tau)
        t += x;
    return t;
}

SchemeEvaluation evaluate_scheme(const SchemeAllocation &alloc, const ChannelRealization &ch,
                                 const SystemParams &params, double tol)
{
    SchemeEvaluation ev;
    auto &r = ev.constraints;
    r.tolerance = tol;
    const int n = ch.num_wds;
    const double eta = params.harvest_efficiency;
    const double imax = params.itc_threshold;
    const double hap_noise = params.noise_power + ch.h_th * params.primary_tx_power;

    r.add("tau1>=0", -alloc.tau1, 0.0, false);
    r.add("time_budget", params.ce_duration + alloc.total_time(), 1.0, false);
    const double herm_err = alloc.Q.size() ? (alloc.Q - alloc.Q.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    const double q_scale = std::max(1.0, std::abs(alloc.Q.trace().real()));
    r.add("Q_hermitian", herm_err, 1e-12 * q_scale, true);
    r.add("Q_psd", alloc.Q.size() ? -min_eigenvalue(alloc.Q) : 0.0, 1e-10 * q_scale, true);
    r.add("hap_power", alloc.Q.trace().real(), params.hap_tx_power, true);
    r.add("itc_phase1", (ch.b.adjoint() * alloc.Q * ch.b)(0, 0).real(), imax, true);

    std::vector<double> used(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r_intra(static_cast<std::size_t>(n), 0.0), v_intra(static_cast<std::size_t>(n), 0.0),
        v_relay(static_cast<std::size_t>(n), 0.0), direct(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> is_direct(static_cast<std::size_t>(n), false);
    for (std::size_t s = 0; s < alloc.slots.size(); ++s)
    {
        const Slot &sl = alloc.slots[s];
        const double tau = alloc.tau[s], p = alloc.power[s];
        const std::string tag = "slot[" + std::to_string(s) + "]";
        r.add(tag + ".tau>=0", -tau, 0.0, false);
        r.add(tag + ".p>=0", -p, 0.0, true);
        r.add(tag + ".itc", ch.itc_gain(sl.pool, params.itc_convention) * p, imax, true);
        used[sl.pool] += tau * p;
        switch (sl.role)
        {
        case SlotRole::Direct:
            is_direct[sl.message] = true;
            direct[sl.message] += link_rate(tau, p, ch.h[sl.message], hap_noise);
            break;
        case SlotRole::Intra:
            r_intra[sl.message] += intra_cluster_rate(tau, p, ch.g[sl.message], ch.h_d[0], params);
            v_intra[sl.message] += hap_overheard_rate(tau, p, ch.h[sl.message], ch.h_th, params);
            break;
        case SlotRole::Relay:
            v_relay[sl.message] += link_rate(tau, p, ch.h[0], hap_noise);
            break;
        }
    }

    const double tau1 = std::max(alloc.tau1, 0.0);
    for (int i = 0; i < n; ++i)
    {
        const double z = std::max((ch.a[i].adjoint() * alloc.Q * ch.a[i])(0, 0).real(), 0.0);
        const double battery = battery_level(params.battery0(ch.wd_index[i]), eta * tau1 * z, params.battery_cap);
        r.add("energy[" + std::to_string(i) + "]", used[i] + params.circuit(ch.wd_index[i]), battery, true);
    }

    ev.rates.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ev.rates[i] = is_direct[i] ? direct[i] : joint_cm_rate(r_intra[i], v_intra[i], v_relay[i]);
    ev.min_rate = n ? *std::min_element(ev.rates.begin(), ev.rates.end()) : 0.0;
    for (double x : ev.rates)
        ev.sum_rate += x;
    return ev;
}

SchemeModel::SchemeModel(const ChannelRealization &ch, const SystemParams &params, SchemeLayout layout,
                         PsdMode mode, double tau_floor)
    : ch_(ch), params_(params), layout_(std::move(layout))
{
    const int n = ch.num_wds;
    const int M = ch.antennas;
    if (layout_.num_wds() != n)
        throw std::invalid_argument("SchemeModel: layout size does not match the channels");
    if (n > 0 && !layout_.direct[0])
        throw std::invalid_argument("SchemeModel: label 0 must send its own data directly");
    if (!(tau_floor > 0.0))
        throw std::invalid_argument("SchemeModel: tau floor must be > 0");
    floor_ = tau_floor;
    slots_ = layout_.slots();

    const double imax = params.itc_threshold;
    const double eta = params.harvest_efficiency;
    const double b2 = ch.b.squaredNorm();
    project_b_ = imax == 0.0 && b2 > 0.0;

    // energy beam subspace
    if (mode == PsdMode::FullMatrix)
    {
        if (project_b_)
        {
            cmat cols(M, M + 1);
            cols.col(0) = ch.b;
            cols.rightCols(M) = cmat::Identity(M, M);
            Eigen::HouseholderQR<cmat> qr(cols);
            cmat q = qr.householderQ();
            U_ = q.rightCols(M - 1);
        }
        else
            U_ = cmat::Identity(M, M);
    }
    else
    {
        cmat cols(M, n + (project_b_ ? 0 : 1));
        for (int i = 0; i < n; ++i)
        {
            cvec a = ch.a[i];
            if (project_b_)
                a -= ch.b * (ch.b.adjoint() * a)(0, 0) / b2;
            cols.col(i) = a;
        }
        if (!project_b_)
            cols.col(n) = ch.b;
        U_ = orthonormal_basis(cols);
    }
    k_ = static_cast<int>(U_.cols());
    has_w_ = params.hap_tx_power > 0.0 && k_ > 0;

    std::vector<double> reach(static_cast<std::size_t>(n), 0.0);
    q_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        const cvec ua = U_.adjoint() * ch.a[i];
        q_[i] = barrier::quad_form_coeffs(ua);
        reach[i] = has_w_ ? ua.squaredNorm() : 0.0;
    }
    const cvec ub = U_.adjoint() * ch.b;
    qb_ = barrier::quad_form_coeffs(ub);
    bnorm2_ = project_b_ ? 0.0 : ub.squaredNorm();
    ub_ = ub;

    // slots that can never carry energy
    gain_.resize(slots_.size());
    enabled_.assign(slots_.size(), true);
    for (std::size_t s = 0; s < slots_.size(); ++s)
    {
        const int pool = slots_[s].pool;
        const int wd = ch.wd_index[pool];
        gain_[s] = ch.itc_gain(pool, params.itc_convention);
        const double own = params.battery0(wd) - params.circuit(wd);
        const double cap = params.battery_cap - params.circuit(wd);
        if (imax == 0.0 && gain_[s] > 0.0)
            enabled_[s] = false;
        if (own <= 0.0 && reach[pool] <= 0.0)
            enabled_[s] = false;
        if (cap <= 0.0)
            enabled_[s] = false;
    }
    for (int i = 0; i < n; ++i)
    {
        const int wd = ch.wd_index[i];
        if (params.battery_cap < params.circuit(wd) ||
            (params.battery0(wd) < params.circuit(wd) && reach[i] <= 0.0))
            trivial_ = Trivial::Infeasible;
    }
    if (params.ce_duration >= 1.0)
        trivial_ = Trivial::Infeasible;

    // rate rows
    const auto coef = rate_coefficients(ch, params);
    auto slot_of = [&](SlotRole role, int msg) {
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if (slots_[s].role == role && slots_[s].message == msg)
                return static_cast<int>(s);
        return -1;
    };
    auto term = [&](Row &row, int s, double rho) {
        if (s >= 0 && enabled_[s] && rho > 0.0)
            row.terms.push_back({s, rho});
    };
    for (int i = 0; i < n; ++i)
    {
        if (layout_.direct[i])
        {
            Row r{i, {}};
            term(r, slot_of(SlotRole::Direct, i), coef.rho[i]);
            rows_.push_back(r);
        }
        else
        {
            const int intra = slot_of(SlotRole::Intra, i);
            Row r2{i, {}};
            term(r2, intra, coef.rho_bar[i]);
            Row v{i, {}};
            term(v, intra, coef.rho[i]);
            term(v, slot_of(SlotRole::Relay, i), coef.rho0);
            rows_.push_back(r2);
            rows_.push_back(v);
        }
    }
    if (trivial_ == Trivial::None)
        for (const auto &r : rows_)
            if (r.terms.empty())
                trivial_ = Trivial::ZeroOptimum;
    (void)eta;

    // variable layout
    int next = 0;
    if (has_w_)
        i_tau1_ = next++;
    i_tau_.assign(slots_.size(), -1);
    i_x_.assign(slots_.size(), -1);
    for (std::size_t s = 0; s < slots_.size(); ++s)
        if (enabled_[s])
        {
            i_tau_[s] = next++;
            i_x_[s] = next++;
        }
    if (has_w_)
    {
        i_psd_ = next;
        next += k_ * k_;
    }
    n_core_ = next;
}

int SchemeModel::time_variable_count() const
{
    int c = has_w_ ? 1 : 0;
    for (bool e : enabled_)
        c += e ? 1 : 0;
    return c;
}

void SchemeModel::build_rows(barrier::Problem &pr, bool max_min, double target) const
{
    const double eta = params_.harvest_efficiency;
    const double imax = params_.itc_threshold;
    const int sbar = max_min ? n_core_ : -1;
    auto add = [&](std::vector<int> idx, std::vector<double> coef, double rhs) {
        pr.linear.push_back({std::move(idx), std::move(coef), rhs});
    };

    std::vector<int> time_idx;
    std::vector<double> time_coef;
    if (has_w_)
    {
        add({i_tau1_}, {-1.0}, -floor_);
        time_idx.push_back(i_tau1_);
        time_coef.push_back(1.0);
    }
    for (std::size_t s = 0; s < slots_.size(); ++s)
    {
        if (!enabled_[s])
            continue;
        add({i_tau_[s]}, {-1.0}, -floor_);
        add({i_x_[s]}, {-1.0}, 0.0);
        if (gain_[s] > 0.0)
            add({i_x_[s], i_tau_[s]}, {1.0, -imax / (eta * gain_[s])}, 0.0);
        time_idx.push_back(i_tau_[s]);
        time_coef.push_back(1.0);
    }
    if (max_min)
    {
        add({sbar}, {-1.0}, 0.0);
        add(time_idx, time_coef, 1.0 - params_.ce_duration);
    }

    auto psd_row = [&](std::vector<int> &idx, std::vector<double> &coef, const std::vector<double> &w,
                       double scale) {
        for (int p = 0; p < k_ * k_; ++p)
            if (w[p] != 0.0)
            {
                idx.push_back(i_psd_ + p);
                coef.push_back(scale * w[p]);
            }
    };
    if (has_w_)
    {
        std::vector<int> idx{i_tau1_};
        std::vector<double> coef{-params_.hap_tx_power};
        psd_row(idx, coef, barrier::trace_coeffs(k_), 1.0);
        add(idx, coef, 0.0);
        if (!project_b_ && bnorm2_ > 0.0)
        {
            std::vector<int> bi{i_tau1_};
            std::vector<double> bc{-imax};
            psd_row(bi, bc, qb_, 1.0);
            add(bi, bc, 0.0);
        }
    }

    for (int j = 0; j < ch_.num_wds; ++j)
    {
        const int wd = ch_.wd_index[j];
        std::vector<int> idx;
        std::vector<double> coef;
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if (enabled_[s] && slots_[s].pool == j)
            {
                idx.push_back(i_x_[s]);
                coef.push_back(1.0);
            }
        const double own = (params_.battery0(wd) - params_.circuit(wd)) / eta;
        if (idx.empty() && own >= 0.0)
            continue;
        if (std::isfinite(params_.battery_cap) && !idx.empty())
            add(idx, coef, (params_.battery_cap - params_.circuit(wd)) / eta);
        if (has_w_)
            psd_row(idx, coef, q_[j], -1.0);
        add(idx, coef, own);
    }

    for (const auto &row : rows_)
    {
        barrier::RateRow rr;
        for (const auto &t : row.terms)
            rr.terms.push_back({i_tau_[t.slot], i_x_[t.slot], t.rho});
        rr.sbar = sbar;
        rr.target = max_min ? 0.0 : target;
        pr.rates.push_back(std::move(rr));
    }
    if (has_w_)
    {
        pr.psd_offset = i_psd_;
        pr.psd_dim = k_;
    }
}

barrier::Problem SchemeModel::max_min_problem() const
{
    barrier::Problem pr;
    pr.n = n_core_ + 1;
    pr.c.assign(static_cast<std::size_t>(pr.n), 0.0);
    pr.c[n_core_] = -1.0;
    build_rows(pr, true, 0.0);
    return pr;
}

barrier::Problem SchemeModel::min_time_problem(double target) const
{
    barrier::Problem pr;
    pr.n = n_core_;
    pr.c.assign(static_cast<std::size_t>(pr.n), 0.0);
    if (has_w_)
        pr.c[i_tau1_] = 1.0;
    for (std::size_t s = 0; s < slots_.size(); ++s)
        if (enabled_[s])
            pr.c[i_tau_[s]] = 1.0;
    build_rows(pr, false, target);
    return pr;
}

std::vector<double> SchemeModel::start(bool max_min, double scale) const
{
    const double eta = params_.harvest_efficiency;
    const double imax = params_.itc_threshold;
    std::vector<double> v(static_cast<std::size_t>(n_core_ + (max_min ? 1 : 0)), 0.0);
    const double tau = scale * 0.9 * (1.0 - params_.ce_duration) / std::max(time_variable_count(), 1);
    if (!(tau > 2.0 * floor_))
        return {};

    Point p = zero_point();
    if (has_w_)
    {
        v[i_tau1_] = tau;
        p.tau1 = tau;
        double w = params_.hap_tx_power;
        if (!project_b_ && bnorm2_ > 0.0)
            w = std::min(w, imax / bnorm2_);
        p.X = cmat::Identity(k_, k_) * (0.5 * tau * w / k_);
        // the complement of b is free of the ITC, so it can take the remaining power
        if (!project_b_ && bnorm2_ > 0.0 && k_ > 1)
        {
            const cmat perp = cmat::Identity(k_, k_) - ub_ * ub_.adjoint() / bnorm2_;
            p.X += perp * (0.4 * tau * params_.hap_tx_power / (k_ - 1));
        }
        const auto xp = barrier::params_from_hermitian(p.X);
        std::copy(xp.begin(), xp.end(), v.begin() + i_psd_);
    }

    for (int j = 0; j < ch_.num_wds; ++j)
    {
        const int wd = ch_.wd_index[j];
        int count = 0;
        for (std::size_t s = 0; s < slots_.size(); ++s)
            count += enabled_[s] && slots_[s].pool == j ? 1 : 0;
        double avail = (params_.battery0(wd) - params_.circuit(wd)) / eta;
        if (has_w_)
            avail += dotv(q_[j], p.X);
        if (!(avail > 0.0) && (count > 0 || avail < 0.0))
            return {};
        if (count == 0)
            continue;
        double share = avail / count;
        if (std::isfinite(params_.battery_cap))
            share = std::min(share, (params_.battery_cap - params_.circuit(wd)) / eta / count);
        for (std::size_t s = 0; s < slots_.size(); ++s)
        {
            if (!enabled_[s] || slots_[s].pool != j)
                continue;
            double cap = share;
            if (gain_[s] > 0.0)
                cap = std::min(cap, tau * imax / (eta * gain_[s]));
            v[i_tau_[s]] = tau;
            v[i_x_[s]] = 0.5 * cap;
            p.tau[s] = tau;
            p.x[s] = 0.5 * cap;
        }
    }
    if (max_min)
    {
        const auto r = rates(p);
        const double m = r.empty() ? 0.0 : *std::min_element(r.begin(), r.end());
        if (!(m > 0.0))
            return {};
        v[n_core_] = 0.5 * m;
    }
    return v;
}

std::optional<std::vector<double>> SchemeModel::max_min_start() const
{
    if (trivial_ != Trivial::None)
        return std::nullopt;
    auto v = start(true, 1.0);
    if (v.empty())
        return std::nullopt;
    return v;
}

std::optional<std::vector<double>> SchemeModel::min_time_start(double target) const
{
    if (trivial_ != Trivial::None)
        return std::nullopt;
    double scale = 1.0;
    for (int it = 0; it < 200; ++it, scale *= 2.0)
    {
        auto v = start(false, scale);
        if (v.empty())
            return std::nullopt;
        const Point p = decode(v, false);
        const auto r = rates(p);
        if (*std::min_element(r.begin(), r.end()) > target * (1.0 + 1e-6) + 1e-300)
            return v;
    }
    return std::nullopt;
}

SchemeModel::Point SchemeModel::zero_point() const
{
    Point p;
    p.X = cmat::Zero(k_, k_);
    p.tau.assign(slots_.size(), 0.0);
    p.x.assign(slots_.size(), 0.0);
    return p;
}

SchemeModel::Point SchemeModel::decode(const std::vector<double> &v, bool with_sbar) const
{
    Point p = zero_point();
    if (has_w_)
    {
        p.tau1 = v[i_tau1_];
        p.X = barrier::hermitian_from_params(k_, v.data() + i_psd_);
    }
    for (std::size_t s = 0; s < slots_.size(); ++s)
        if (enabled_[s])
        {
            p.tau[s] = v[i_tau_[s]];
            p.x[s] = v[i_x_[s]];
        }
    if (with_sbar)
        p.sbar = v[n_core_];
    return p;
}

std::vector<double> SchemeModel::rates(const Point &p) const
{
    const auto n = static_cast<std::size_t>(ch_.num_wds);
    std::vector<double> out(n, std::numeric_limits<double>::infinity());
    for (const auto &row : rows_)
    {
        double r = 0.0;
        for (const auto &t : row.terms)
            r += perspective_rate(std::max(p.tau[t.slot], 0.0), std::max(p.x[t.slot], 0.0), t.rho);
        out[row.label] = std::min(out[row.label], r);
    }
    for (auto &x : out)
        if (!std::isfinite(x))
            x = 0.0;
    return out;
}

std::vector<double> SchemeModel::rate_slack(const Point &p) const
{
    auto r = rates(p);
    for (auto &x : r)
        x -= p.sbar;
    return r;
}

double SchemeModel::pool_budget(int label, const Point &p) const
{
    const int wd = ch_.wd_index[label];
    const double eta = params_.harvest_efficiency;
    double z = 0.0;
    if (has_w_)
        z = std::max((ch_.a[label].adjoint() * W(p) * ch_.a[label])(0, 0).real(), 0.0);
    const double e = battery_level(params_.battery0(wd), eta * z, params_.battery_cap);
    return (e - params_.circuit(wd)) / eta;
}

void SchemeModel::clean(Point &p) const
{
    const double eta = params_.harvest_efficiency;
    const double imax = params_.itc_threshold;
    const double snap = 10.0 * floor_;
    auto fit_budgets = [&](Point &q) {
        for (std::size_t s = 0; s < slots_.size(); ++s)
        {
            q.x[s] = std::max(q.x[s], 0.0);
            if (gain_[s] > 0.0)
                q.x[s] = std::min(q.x[s], q.tau[s] * imax / (eta * gain_[s]));
        }
        for (int j = 0; j < ch_.num_wds; ++j)
        {
            double used = 0.0;
            for (std::size_t s = 0; s < slots_.size(); ++s)
                if (slots_[s].pool == j)
                    used += q.x[s];
            const double budget = pool_budget(j, q);
            if (used > budget && used > 0.0)
            {
                const double f = budget > 0.0 ? budget / used : 0.0;
                for (std::size_t s = 0; s < slots_.size(); ++s)
                    if (slots_[s].pool == j)
                        q.x[s] *= f;
            }
        }
    };
    fit_budgets(p);

    // Durations near the floor are zeroed unless they still carry rate;
    // short slots at high power are legitimate when energy is scarce.
    const auto base = rates(p);
    const double slack = 1e-9 * (base.empty() ? 0.0 : std::max(*std::min_element(base.begin(), base.end()), 0.0));
    auto harmless = [&](const Point &q) {
        const auto r = rates(q);
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] < base[i] - slack)
                return false;
        return true;
    };
    if (p.tau1 > 0.0 && p.tau1 < snap)
    {
        Point q = p;
        q.tau1 = 0.0;
        q.X.setZero();
        fit_budgets(q);
        if (harmless(q))
            p = q;
    }
    for (std::size_t s = 0; s < slots_.size(); ++s)
    {
        if (!(p.tau[s] > 0.0 && p.tau[s] < snap))
            continue;
        Point q = p;
        q.tau[s] = 0.0;
        q.x[s] = 0.0;
        if (harmless(q))
            p = q;
    }
    const auto r = rates(p);
    p.sbar = r.empty() ? 0.0 : *std::min_element(r.begin(), r.end());
}

double SchemeModel::upper_bound() const
{
    const double eta = params_.harvest_efficiency;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> label_bound(static_cast<std::size_t>(ch_.num_wds), std::numeric_limits<double>::infinity());
    for (const auto &row : rows_)
    {
        double r = 0.0;
        for (const auto &t : row.terms)
        {
            const int j = slots_[t.slot].pool;
            const int wd = ch_.wd_index[j];
            double e = std::max(params_.battery0(wd), 0.0);
            if (has_w_)
                e += eta * params_.hap_tx_power * (U_.adjoint() * ch_.a[j]).squaredNorm();
            e = std::min(e, params_.battery_cap);
            const double xmax = std::max(e - params_.circuit(wd), 0.0) / eta;
            r += std::log2(1.0 + t.rho * xmax);
        }
        label_bound[row.label] = std::min(label_bound[row.label], r);
    }
    for (double b : label_bound)
        best = std::min(best, b);
    return std::isfinite(best) ? best : 0.0;
}

cmat SchemeModel::W(const Point &p) const
{
    if (k_ == 0)
        return cmat::Zero(ch_.antennas, ch_.antennas);
    cmat w = U_ * p.X * U_.adjoint();
    return 0.5 * (w + w.adjoint());
}

SchemeAllocation SchemeModel::allocation(const Point &p) const
{
    const double eta = params_.harvest_efficiency;
    SchemeAllocation a;
    a.tau1 = p.tau1;
    a.Q = p.tau1 > 0.0 ? cmat(W(p) / p.tau1) : cmat(cmat::Zero(ch_.antennas, ch_.antennas));
    a.slots = slots_;
    a.tau = p.tau;
    a.power.resize(slots_.size());
    for (std::size_t s = 0; s < slots_.size(); ++s)
        a.power[s] = p.tau[s] > 0.0 ? eta * p.x[s] / p.tau[s] : 0.0;
    return a;
}

TransformedPoint SchemeModel::transformed(const Point &p) const
{
    const int n = ch_.num_wds;
    const double eta = params_.harvest_efficiency;
    TransformedPoint t = TransformedPoint::zeros(n, ch_.antennas);
    t.tau1 = p.tau1;
    t.W = W(p);
    for (std::size_t s = 0; s < slots_.size(); ++s)
    {
        const Slot &sl = slots_[s];
        if (sl.role == SlotRole::Intra)
        {
            t.tau2[sl.message] = p.tau[s];
            t.psi[sl.message] = p.x[s];
        }
        else if (sl.role == SlotRole::Relay || sl.message == 0)
        {
            t.tau3[sl.message] = p.tau[s];
            t.theta[sl.message] = p.x[s];
        }
        else
            throw std::logic_error("SchemeModel::transformed: layout is not cooperative");
    }
    for (int i = 0; i < n; ++i)
    {
        t.z[i] = std::max((ch_.a[i].adjoint() * t.W * ch_.a[i])(0, 0).real(), 0.0);
        t.battery[i] = battery_level(params_.battery0(ch_.wd_index[i]), eta * t.z[i], params_.battery_cap);
    }
    t.sbar = p.sbar;
    return t;
}

} // namespace cwpcn
