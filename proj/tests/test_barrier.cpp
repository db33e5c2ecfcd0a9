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

#include "doctest.h"

#include <cmath>
#include <random>

using namespace cwpcn;
using namespace cwpcn::barrier;

TEST_CASE("hermitian parametrization round trip and quadratic forms")
{
    std::mt19937_64 g(1);
    std::normal_distribution<double> nd;
    for (int k : {1, 2, 3, 5})
    {
        cmat G(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                G(r, c) = cplx(nd(g), nd(g));
        const cmat X = G * G.adjoint();
        const auto p = params_from_hermitian(X);
        REQUIRE(static_cast<int>(p.size()) == psd_param_count(k));
        CHECK((hermitian_from_params(k, p.data()) - X).norm() <= 1e-13 * X.norm());

        cvec u(k);
        for (int i = 0; i < k; ++i)
            u(i) = cplx(nd(g), nd(g));
        const auto w = quad_form_coeffs(u);
        double q = 0.0, tr = 0.0;
        const auto tw = trace_coeffs(k);
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            q += w[i] * p[i];
            tr += tw[i] * p[i];
        }
        CHECK(q == doctest::Approx((u.adjoint() * X * u)(0, 0).real()).epsilon(1e-12));
        CHECK(tr == doctest::Approx(X.trace().real()).epsilon(1e-12));
    }
}

TEST_CASE("box LP")
{
    // min -x0 - 2 x1, 0 <= x <= 1, x0 + x1 <= 1.5 -> (0.5, 1)
    Problem p;
    p.n = 2;
    p.c = {-1.0, -2.0};
    p.linear = {{{0}, {-1.0}, 0.0}, {{1}, {-1.0}, 0.0}, {{0}, {1.0}, 1.0}, {{1}, {1.0}, 1.0},
                {{0, 1}, {1.0, 1.0}, 1.5}};
    for (const auto *kt : kernels::available_tables())
    {
        const auto r = minimize(p, {0.1, 0.1}, {}, *kt);
        CHECK(r.status == Status::Converged);
        CHECK(r.v[0] == doctest::Approx(0.5).epsilon(1e-7));
        CHECK(r.v[1] == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(r.gap <= 1e-9 * 2.5 + 1e-12);
    }
}

TEST_CASE("rate row: max s with tau log2(1 + rho x / tau) >= s")
{
    // tau <= 1, x <= 1 -> s* = log2(1 + rho)
    for (double rho : {0.5, 10.0, 1e4})
    {
        Problem p;
        p.n = 3; // tau, x, s
        p.c = {0.0, 0.0, -1.0};
        p.linear = {{{0}, {-1.0}, -1e-9}, {{0}, {1.0}, 1.0}, {{1}, {-1.0}, 0.0}, {{1}, {1.0}, 1.0}, {{2}, {-1.0}, 0.0}};
        p.rates = {RateRow{{{0, 1, rho}}, 2, 0.0}};
        const auto r = minimize(p, {0.5, 0.5, 1e-3}, {});
        CHECK(r.status == Status::Converged);
        CHECK(r.v[2] == doctest::Approx(std::log2(1.0 + rho)).epsilon(1e-8));
    }
}

TEST_CASE("two users sharing time: closed-form max-min")
{
    // tau_a + tau_b <= 1, x_a <= 1, x_b <= 1, rates tau log2(1 + x/tau)
    // symmetric -> tau = 0.5 each, s* = 0.5 log2(3)
    Problem p;
    p.n = 5;
    p.c = {0, 0, 0, 0, -1.0};
    p.linear = {{{0}, {-1.0}, -1e-9}, {{2}, {-1.0}, -1e-9}, {{1}, {-1.0}, 0.0}, {{3}, {-1.0}, 0.0},
                {{1}, {1.0}, 1.0},   {{3}, {1.0}, 1.0},   {{0, 2}, {1.0, 1.0}, 1.0}, {{4}, {-1.0}, 0.0}};
    p.rates = {RateRow{{{0, 1, 1.0}}, 4, 0.0}, RateRow{{{2, 3, 1.0}}, 4, 0.0}};
    const auto r = minimize(p, {0.3, 0.5, 0.3, 0.5, 0.01}, {});
    CHECK(r.status == Status::Converged);
    CHECK(r.v[4] == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-8));
    CHECK(r.v[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("PSD block: min tr(C X) over the trace simplex is the smallest eigenvalue")
{
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd;
    for (int k : {2, 3, 4})
    {
        cmat G(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                G(r, c) = cplx(nd(g), nd(g));
        const cmat C = 0.5 * (G + G.adjoint());
        Eigen::SelfAdjointEigenSolver<cmat> es(C);
        const double lmin = es.eigenvalues().minCoeff();

        // objective coefficients by probing unit parameter vectors
        const int np = psd_param_count(k);
        Problem p;
        p.n = np;
        p.c.assign(np, 0.0);
        for (int q = 0; q < np; ++q)
        {
            std::vector<double> e(np, 0.0);
            e[q] = 1.0;
            p.c[q] = (C * hermitian_from_params(k, e.data())).trace().real();
        }
        p.psd_offset = 0;
        p.psd_dim = k;
        std::vector<int> idx(k);
        for (int a = 0; a < k; ++a)
            idx[a] = a;
        p.linear = {{idx, std::vector<double>(k, 1.0), 1.0}};
        const auto v0 = params_from_hermitian(cmat::Identity(k, k) * (0.5 / k));
        for (const auto *kt : kernels::available_tables())
        {
            const auto r = minimize(p, v0, {}, *kt);
            CHECK(r.status == Status::Converged);
            double obj = 0.0;
            for (int q = 0; q < np; ++q)
                obj += p.c[q] * r.v[q];
            CHECK(obj == doctest::Approx(std::min(lmin, 0.0)).epsilon(1e-7));
        }
    }
}

TEST_CASE("infeasible start is reported, interior check names the row")
{
    Problem p;
    p.n = 1;
    p.c = {1.0};
    p.linear = {{{0}, {1.0}, 1.0}};
    CHECK(check_strict_interior(p, {2.0}) == "linear row 0");
    CHECK(check_strict_interior(p, {0.5}).empty());
    CHECK(minimize(p, {2.0}, {}).status == Status::InfeasibleStart);
    CHECK(to_string(Status::Converged) == "converged");
}

TEST_CASE("trace records the barrier schedule")
{
    Problem p;
    p.n = 1;
    p.c = {-1.0};
    p.linear = {{{0}, {1.0}, 1.0}, {{0}, {-1.0}, 0.0}};
    Options o;
    o.record_trace = true;
    const auto r = minimize(p, {0.5}, o);
    REQUIRE(r.trace.size() == static_cast<std::size_t>(r.outer_iterations));
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i].t == doctest::Approx(10.0 * r.trace[i - 1].t));
}
