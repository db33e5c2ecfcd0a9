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

#include "cwpcn/kernels.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace cwpcn::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64 &g)
{
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto &x : v)
        x = nd(g);
    return v;
}

// A = B B^T + n I, row-major n x n
std::vector<double> random_spd(std::size_t n, std::mt19937_64 &g)
{
    const auto b = random_vec(n * n, g);
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            long double s = 0.0L;
            for (std::size_t k = 0; k < n; ++k)
                s += static_cast<long double>(b[i * n + k]) * b[j * n + k];
            a[i * n + j] = static_cast<double>(s) + (i == j ? static_cast<double>(n) : 0.0);
        }
    return a;
}

} // namespace

TEST_CASE("scalar table is always available and listed first")
{
    const auto tables = available_tables();
    REQUIRE(!tables.empty());
    CHECK(tables.front()->isa == Isa::Scalar);
    CHECK(isa_name(Isa::Scalar) == "scalar");
    CHECK(isa_name(Isa::Avx2) == "avx2");
    CHECK(isa_name(Isa::Neon) == "neon");
    bool found = false;
    for (const auto *t : tables)
        found = found || t->isa == active().isa;
    CHECK(found);
}

TEST_CASE("dot matches an extended-precision sum for every table")
{
    std::mt19937_64 g(1);
    for (const auto *t : available_tables())
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 63u, 130u})
        {
            const auto x = random_vec(n, g), y = random_vec(n, g);
            long double ref = 0.0L, mag = 0.0L;
            for (std::size_t i = 0; i < n; ++i)
            {
                ref += static_cast<long double>(x[i]) * y[i];
                mag += std::fabs(static_cast<long double>(x[i]) * y[i]);
            }
            const double got = t->dot(x, y);
            CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-14 * static_cast<double>(mag) + 1e-300);
        }
}

TEST_CASE("axpy and syr_lower agree with the scalar reference")
{
    std::mt19937_64 g(2);
    const auto &ref = scalar_table();
    for (const auto *t : available_tables())
        for (std::size_t n : {1u, 5u, 8u, 13u, 33u})
        {
            const auto x = random_vec(n, g);
            auto y1 = random_vec(n, g);
            auto y2 = y1;
            ref.axpy(0.7, x, y1);
            t->axpy(0.7, x, y2);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

            std::vector<double> a1(n * n, 0.25), a2 = a1;
            ref.syr_lower(-1.5, x, a1.data(), n);
            t->syr_lower(-1.5, x, a2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                {
                    CHECK(a1[i * n + j] == doctest::Approx(0.25 - 1.5 * x[i] * x[j]).epsilon(1e-14));
                    CHECK(a2[i * n + j] == doctest::Approx(a1[i * n + j]).epsilon(1e-14));
                }
            // upper triangle untouched
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    CHECK(a2[i * n + j] == 0.25);
        }
}

TEST_CASE("cholesky reproduces the matrix and solves, equivalently across tables")
{
    std::mt19937_64 g(3);
    for (std::size_t n : {1u, 2u, 6u, 17u, 40u, 90u})
    {
        const auto a = random_spd(n, g);
        const auto rhs = random_vec(n, g);
        std::vector<double> x_ref;
        for (const auto *t : available_tables())
        {
            auto l = a;
            REQUIRE(t->cholesky(l.data(), n, n));
            double max_err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                {
                    double s = 0.0;
                    for (std::size_t k = 0; k <= j; ++k)
                        s += l[i * n + k] * l[j * n + k];
                    max_err = std::max(max_err, std::abs(s - a[i * n + j]));
                    scale = std::max(scale, std::abs(a[i * n + j]));
                }
            CHECK(max_err <= 1e-13 * scale);

            auto x = rhs;
            cholesky_solve(*t, l.data(), n, n, x);
            for (std::size_t i = 0; i < n; ++i)
            {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    s += a[std::max(i, j) * n + std::min(i, j)] * x[j];
                CHECK(s == doctest::Approx(rhs[i]).epsilon(1e-10));
            }
            if (x_ref.empty())
                x_ref = x;
            else
                for (std::size_t i = 0; i < n; ++i)
                    CHECK(x[i] == doctest::Approx(x_ref[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("cholesky rejects indefinite and non-finite matrices")
{
    for (const auto *t : available_tables())
    {
        std::vector<double> a = {1.0, 0.0, 2.0, 1.0}; // [[1,2],[2,1]] lower
        CHECK_FALSE(t->cholesky(a.data(), 2, 2));
        std::vector<double> z = {0.0};
        CHECK_FALSE(t->cholesky(z.data(), 1, 1));
        std::vector<double> nan = {std::nan("")};
        CHECK_FALSE(t->cholesky(nan.data(), 1, 1));
    }
}

TEST_CASE("leading dimension larger than n is respected")
{
    std::mt19937_64 g(4);
    const std::size_t n = 9, lda = 12;
    const auto a = random_spd(n, g);
    for (const auto *t : available_tables())
    {
        std::vector<double> big(n * lda, -7.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                big[i * lda + j] = a[i * n + j];
        auto packed = a;
        REQUIRE(t->cholesky(big.data(), n, lda));
        REQUIRE(t->cholesky(packed.data(), n, n));
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = 0; j <= i; ++j)
                CHECK(big[i * lda + j] == doctest::Approx(packed[i * n + j]).epsilon(1e-14));
            for (std::size_t j = n; j < lda; ++j)
                CHECK(big[i * lda + j] == -7.0);
        }
    }
}
