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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "cwpcn/kernels.hpp"
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace cwpcn::kernels {
namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    const double *px = x.data();
    const double *py = y.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
    {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
    }
    if (i + 4 <= n)
    {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += px[i] * py[i];
    return s;
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y)
{
    const std::size_t n = x.size();
    const double *px = x.data();
    double *py = y.data();
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
    for (; i < n; ++i)
        py[i] += alpha * px[i];
}

void syr_lower_avx2(double alpha, std::span<const double> x, double *a, std::size_t lda)
{
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double s = alpha * x[i];
        if (s == 0.0)
            continue;
        axpy_avx2(s, x.first(i + 1), std::span<double>(a + i * lda, i + 1));
    }
}

bool cholesky_avx2(double *a, std::size_t n, std::size_t lda)
{
    return detail::cholesky_left_looking(a, n, lda, dot_avx2);
}

const KernelTable table{Isa::Avx2, dot_avx2, axpy_avx2, syr_lower_avx2, cholesky_avx2};

} // namespace

const KernelTable *avx2_table()
{
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &table : nullptr;
}

} // namespace cwpcn::kernels
