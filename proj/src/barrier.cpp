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


#include "cwpcn/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace cwpcn::barrier {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct BasisTerm
{
    cplx coef;
    int a;
    int b;
};

// B_p = sum coef e_a e_b^T
std::vector<std::vector<BasisTerm>> hermitian_basis(int k)
{
    std::vector<std::vector<BasisTerm>> basis;
    basis.reserve(static_cast<std::size_t>(k * k));
    for (int a = 0; a < k; ++a)
        basis.push_back({{cplx(1.0, 0.0), a, a}});
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
        {
            basis.push_back({{cplx(1.0, 0.0), a, b}, {cplx(1.0, 0.0), b, a}});
            basis.push_back({{cplx(0.0, 1.0), a, b}, {cplx(0.0, -1.0), b, a}});
        }
    return basis;
}

struct PerspEval
{
    double value = 0.0;
    double d_tau = 0.0;
    double d_x = 0.0;
    double h_tt = 0.0;
    double h_tx = 0.0;
    double h_xx = 0.0;
};

PerspEval persp(double tau, double x, double rho)
{
    PerspEval e;
    const double u = rho * x / tau;
    const double opu = 1.0 + u;
    const double l1p = std::log1p(u);
    e.value = tau * l1p / kLn2;
    e.d_x = rho / (opu * kLn2);
    e.d_tau = (l1p - u / opu) / kLn2;
    const double s = -1.0 / (kLn2 * tau * opu * opu);
    e.h_tt = s * u * u;
    e.h_tx = -s * rho * u;
    e.h_xx = s * rho * rho;
    return e;
}

double rate_value(const RateRow &row, const double *v)
{
    double f = -row.target;
    for (const auto &t : row.terms)
    {
        const double tau = v[t.tau];
        const double x = v[t.x];
        if (!(tau > 0.0) || x < 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        f += tau * std::log1p(t.rho * x / tau) / kLn2;
    }
    if (row.sbar >= 0)
        f -= v[row.sbar];
    return f;
}

double row_dot(const SparseRow &r, const double *v)
{
    double s = 0.0;
    for (std::size_t j = 0; j < r.idx.size(); ++j)
        s += r.coef[j] * v[r.idx[j]];
    return s;
}

class Evaluator
{
public:
    Evaluator(const Problem &p) : p_(p)
    {
        if (p.psd_offset >= 0)
            basis_ = hermitian_basis(p.psd_dim);
    }

    // log det X(v), or nullopt if X(v) is not positive definite
    std::optional<double> logdet(const double *v, Eigen::MatrixXcd *inverse = nullptr) const
    {
        if (p_.psd_offset < 0)
            return 0.0;
        const int k = p_.psd_dim;
        const cmat X = hermitian_from_params(k, v + p_.psd_offset);
        Eigen::LLT<cmat> llt(X);
        if (llt.info() != Eigen::Success)
            return std::nullopt;
        double ld = 0.0;
        for (int i = 0; i < k; ++i)
        {
            const double d = llt.matrixL()(i, i).real();
            if (!(d > 0.0) || !std::isfinite(d))
                return std::nullopt;
            ld += 2.0 * std::log(d);
        }
        if (inverse)
            *inverse = llt.solve(cmat::Identity(k, k));
        return ld;
    }

    const std::vector<std::vector<BasisTerm>> &basis() const { return basis_; }

private:
    const Problem &p_;
    std::vector<std::vector<BasisTerm>> basis_;
};

} // namespace

std::string to_string(Status s)
{
    switch (s)
    {
    case Status::Converged: return "converged";
    case Status::MaxIter: return "max_iter";
    case Status::Stalled: return "stalled";
    case Status::InfeasibleStart: return "infeasible_start";
    }
    return "unknown";
}

int psd_param_count(int k) { return k * k; }

cmat hermitian_from_params(int k, const double *params)
{
    cmat X(k, k);
    for (int a = 0; a < k; ++a)
        X(a, a) = params[a];
    int p = k;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
        {
            const cplx z(params[p], params[p + 1]);
            X(a, b) = z;
            X(b, a) = std::conj(z);
            p += 2;
        }
    return X;
}

std::vector<double> params_from_hermitian(const cmat &X)
{
    const int k = static_cast<int>(X.rows());
    std::vector<double> out(static_cast<std::size_t>(k * k));
    for (int a = 0; a < k; ++a)
        out[a] = X(a, a).real();
    int p = k;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
        {
            const cplx z = 0.5 * (X(a, b) + std::conj(X(b, a)));
            out[p] = z.real();
            out[p + 1] = z.imag();
            p += 2;
        }
    return out;
}

std::vector<double> quad_form_coeffs(const cvec &u)
{
    const int k = static_cast<int>(u.size());
    std::vector<double> w(static_cast<std::size_t>(k * k));
    for (int a = 0; a < k; ++a)
        w[a] = std::norm(u(a));
    int p = k;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
        {
            const cplx z = std::conj(u(a)) * u(b);
            w[p] = 2.0 * z.real();
            w[p + 1] = -2.0 * z.imag();
            p += 2;
        }
    return w;
}

std::vector<double> trace_coeffs(int k)
{
    std::vector<double> w(static_cast<std::size_t>(k * k), 0.0);
    std::fill(w.begin(), w.begin() + k, 1.0);
    return w;
}

std::string check_strict_interior(const Problem &problem, const std::vector<double> &v)
{
    for (std::size_t r = 0; r < problem.linear.size(); ++r)
        if (!(problem.linear[r].rhs - row_dot(problem.linear[r], v.data()) > 0.0))
            return "linear row " + std::to_string(r);
    for (std::size_t r = 0; r < problem.rates.size(); ++r)
        if (!(rate_value(problem.rates[r], v.data()) > 0.0))
            return "rate row " + std::to_string(r);
    Evaluator ev(problem);
    if (!ev.logdet(v.data()))
        return "psd block";
    return {};
}

Result minimize(const Problem &p, std::vector<double> v0, const Options &opt, const kernels::KernelTable &kt)
{
    Result res;
    res.v = std::move(v0);
    if (!check_strict_interior(p, res.v).empty())
    {
        res.status = Status::InfeasibleStart;
        return res;
    }

    const int n = p.n;
    const auto nn = static_cast<std::size_t>(n);
    const double m = p.barrier_weight();
    Evaluator ev(p);
    const auto &basis = ev.basis();
    const int k = p.psd_dim;
    const int np = p.psd_offset >= 0 ? k * k : 0;

    auto objective = [&](const std::vector<double> &v) {
        return kt.dot(std::span<const double>(p.c), std::span<const double>(v));
    };

    std::vector<double> H(nn * nn), grad(nn), step(nn), diag(nn), vt(nn);
    std::vector<double> slack(p.linear.size()), fval(p.rates.size()), adelta(p.linear.size());
    cmat Y;

    double t = opt.t0 > 0.0 ? opt.t0 : m / std::max(std::abs(objective(res.v)), 1.0);
    int stalls = 0;

    for (int outer = 0; outer < opt.max_outer; ++outer)
    {
        int steps_here = 0;
        bool stalled = false;
        for (int inner = 0; inner < opt.max_inner; ++inner)
        {
            double *v = res.v.data();
            std::fill(H.begin(), H.end(), 0.0);
            for (int i = 0; i < n; ++i)
                grad[i] = t * p.c[i];

            for (std::size_t r = 0; r < p.linear.size(); ++r)
            {
                const auto &row = p.linear[r];
                slack[r] = row.rhs - row_dot(row, v);
                const double inv = 1.0 / slack[r];
                const double w = inv * inv;
                for (std::size_t a = 0; a < row.idx.size(); ++a)
                {
                    const int ia = row.idx[a];
                    grad[ia] += row.coef[a] * inv;
                    const double wa = w * row.coef[a];
                    for (std::size_t b = 0; b < row.idx.size(); ++b)
                    {
                        const int ib = row.idx[b];
                        if (ib <= ia)
                            H[ia * nn + ib] += wa * row.coef[b];
                    }
                }
            }

            std::vector<std::pair<int, double>> fg;
            for (std::size_t r = 0; r < p.rates.size(); ++r)
            {
                const auto &row = p.rates[r];
                fg.clear();
                double f = -row.target;
                auto add_g = [&](int i, double g) {
                    for (auto &e : fg)
                        if (e.first == i)
                        {
                            e.second += g;
                            return;
                        }
                    fg.emplace_back(i, g);
                };
                for (const auto &term : row.terms)
                {
                    const auto e = persp(v[term.tau], v[term.x], term.rho);
                    f += e.value;
                    add_g(term.tau, e.d_tau);
                    add_g(term.x, e.d_x);
                }
                if (row.sbar >= 0)
                {
                    f -= v[row.sbar];
                    add_g(row.sbar, -1.0);
                }
                fval[r] = f;
                const double inv = 1.0 / f;
                // -log f: grad -g/f, hess g g^T / f^2 - Hf / f
                for (const auto &[i, g] : fg)
                {
                    grad[i] -= g * inv;
                    for (const auto &[j, g2] : fg)
                        if (j <= i)
                            H[i * nn + j] += g * g2 * inv * inv;
                }
                for (const auto &term : row.terms)
                {
                    const auto e = persp(v[term.tau], v[term.x], term.rho);
                    const int it = term.tau, ix = term.x;
                    H[it * nn + it] -= e.h_tt * inv;
                    H[ix * nn + ix] -= e.h_xx * inv;
                    if (ix > it)
                        H[ix * nn + it] -= e.h_tx * inv;
                    else
                        H[it * nn + ix] -= e.h_tx * inv;
                }
            }

            double logdet_cur = 0.0;
            if (np)
            {
                logdet_cur = *ev.logdet(v, &Y);
                const int off = p.psd_offset;
                for (int a = 0; a < np; ++a)
                {
                    double g = 0.0;
                    for (const auto &bt : basis[a])
                        g += (bt.coef * Y(bt.b, bt.a)).real();
                    grad[off + a] -= g;
                    for (int b = 0; b <= a; ++b)
                    {
                        cplx h = 0.0;
                        for (const auto &t1 : basis[a])
                            for (const auto &t2 : basis[b])
                                h += t1.coef * t2.coef * Y(t2.b, t1.a) * Y(t1.b, t2.a);
                        H[(off + a) * nn + off + b] += h.real();
                    }
                }
            }

            // equilibrate, factor, solve
            for (int i = 0; i < n; ++i)
            {
                const double d = H[i * nn + i];
                diag[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j)
                    H[i * nn + j] *= diag[i] * diag[j];
            std::vector<double> Hs;
            bool factored = false;
            for (double reg : {0.0, 1e-12, 1e-10, 1e-8, 1e-6})
            {
                if (reg > 0.0)
                {
                    if (Hs.empty())
                        break;
                    H = Hs;
                    for (int i = 0; i < n; ++i)
                        H[i * nn + i] += reg;
                }
                else
                    Hs = H;
                if (kt.cholesky(H.data(), nn, nn))
                {
                    factored = true;
                    break;
                }
            }
            if (!factored)
            {
                stalled = true;
                break;
            }
            for (int i = 0; i < n; ++i)
                step[i] = -grad[i] * diag[i];
            kernels::cholesky_solve(kt, H.data(), nn, nn, step);
            for (int i = 0; i < n; ++i)
                step[i] *= diag[i];

            const double lambda2 = -kt.dot(std::span<const double>(grad), std::span<const double>(step));
            if (!(lambda2 >= 0.0) || !std::isfinite(lambda2))
            {
                stalled = true;
                break;
            }
            // phi is only known to about eps * |t c^T v|; below that the
            // decrement is noise
            const double noise = 1e-13 * std::abs(t * objective(res.v));
            if (lambda2 / 2.0 <= std::max(opt.newton_tol, noise))
                break;

            double smax = 1.0;
            for (std::size_t r = 0; r < p.linear.size(); ++r)
            {
                adelta[r] = row_dot(p.linear[r], step.data());
                if (adelta[r] > 0.0)
                    smax = std::min(smax, opt.step_fraction * slack[r] / adelta[r]);
            }
            for (int i = 0; i < n; ++i)
                if (step[i] < 0.0)
                    for (const auto &row : p.rates)
                        for (const auto &term : row.terms)
                            if (term.tau == i)
                                smax = std::min(smax, opt.step_fraction * v[i] / -step[i]);

            const double ctd = kt.dot(std::span<const double>(p.c), std::span<const double>(step));
            double s = smax;
            bool accepted = false;
            while (s > 1e-14)
            {
                for (int i = 0; i < n; ++i)
                    vt[i] = v[i] + s * step[i];
                double dphi = t * s * ctd;
                for (std::size_t r = 0; r < p.linear.size(); ++r)
                    dphi -= std::log1p(-s * adelta[r] / slack[r]);
                bool ok = true;
                for (std::size_t r = 0; r < p.rates.size() && ok; ++r)
                {
                    const double fn = rate_value(p.rates[r], vt.data());
                    if (!(fn > 0.0))
                        ok = false;
                    else
                        dphi -= std::log(fn / fval[r]);
                }
                if (ok && np)
                {
                    const auto ld = ev.logdet(vt.data());
                    if (!ld)
                        ok = false;
                    else
                        dphi -= *ld - logdet_cur;
                }
                if (ok && dphi <= -opt.armijo_sigma * s * lambda2)
                {
                    accepted = true;
                    break;
                }
                s *= opt.armijo_beta;
            }
            ++steps_here;
            ++res.newton_steps;
            if (!accepted)
            {
                stalled = true;
                break;
            }
            std::swap(res.v, vt);
        }

        ++res.outer_iterations;
        res.t = t;
        res.gap = m / t;
        const double obj = objective(res.v);
        res.objective = obj;
        if (opt.record_trace)
        {
            double ms = std::numeric_limits<double>::infinity();
            for (const auto &row : p.linear)
                ms = std::min(ms, row.rhs - row_dot(row, res.v.data()));
            res.trace.push_back({t, steps_here, obj, res.gap, ms});
        }
        stalls = stalled ? stalls + 1 : 0;
        if (res.gap <= opt.gap_abs + opt.gap_rel * std::abs(obj))
        {
            res.status = Status::Converged;
            return res;
        }
        if (stalls >= 2)
        {
            res.status = Status::Stalled;
            return res;
        }
        t *= opt.growth;
    }
    res.status = Status::MaxIter;
    return res;
}

} // namespace cwpcn::barrier
