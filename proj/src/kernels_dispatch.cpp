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

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cwpcn::kernels {

#ifndef CWPCN_HAVE_AVX2
const KernelTable *avx2_table() { return nullptr; }
#endif
#ifndef CWPCN_HAVE_NEON
const KernelTable *neon_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

namespace {

const KernelTable &select()
{
    const char *env = std::getenv("CWPCN_SIMD");
    const std::string want = env ? env : "auto";
    if (want == "scalar")
        return scalar_table();
    if (want == "avx2")
    {
        if (const auto *t = avx2_table())
            return *t;
        throw std::runtime_error("CWPCN_SIMD=avx2 requested but AVX2/FMA is unavailable");
    }
    if (want == "neon")
    {
        if (const auto *t = neon_table())
            return *t;
        throw std::runtime_error("CWPCN_SIMD=neon requested but NEON is unavailable");
    }
    if (want != "auto")
        throw std::runtime_error("unknown CWPCN_SIMD value: " + want);
    if (const auto *t = avx2_table())
        return *t;
    if (const auto *t = neon_table())
        return *t;
    return scalar_table();
}

} // namespace

const KernelTable &active()
{
    static const KernelTable &table = select();
    return table;
}

std::vector<const KernelTable *> available_tables()
{
    std::vector<const KernelTable *> out{&scalar_table()};
    if (const auto *t = avx2_table())
        out.push_back(t);
    if (const auto *t = neon_table())
        out.push_back(t);
    return out;
}

void cholesky_solve(const KernelTable &k, const double *l, std::size_t n, std::size_t lda, std::span<double> b)
{
    // forward: L y = b
    for (std::size_t i = 0; i < n; ++i)
    {
        const double *row = l + i * lda;
        b[i] = (b[i] - k.dot(std::span<const double>(row, i), b.first(i))) / row[i];
    }
    // backward: L^T x = y, column sweep expressed as axpy over rows of L
    for (std::size_t i = n; i-- > 0;)
    {
        const double *row = l + i * lda;
        b[i] /= row[i];
        k.axpy(-b[i], std::span<const double>(row, i), b.first(i));
    }
}

} // namespace cwpcn::kernels
