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
#include "kernels_impl.hpp"

#include <arm_neon.h>

namespace cwpcn::kernels {
namespace {

double dot_neon(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x.data() + i + 2), vld1q_f64(y.data() + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void axpy_neon(double alpha, std::span<const double> x, std::span<double> y)
{
    const std::size_t n = x.size();
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y.data() + i, vfmaq_f64(vld1q_f64(y.data() + i), va, vld1q_f64(x.data() + i)));
    for (; i < n; ++i)
        y[i] += alpha * x[i];
}

void syr_lower_neon(double alpha, std::span<const double> x, double *a, std::size_t lda)
{
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double s = alpha * x[i];
        if (s != 0.0)
            axpy_neon(s, x.first(i + 1), std::span<double>(a + i * lda, i + 1));
    }
}

bool cholesky_neon(double *a, std::size_t n, std::size_t lda)
{
    return detail::cholesky_left_looking(a, n, lda, dot_neon);
}

const KernelTable table{Isa::Neon, dot_neon, axpy_neon, syr_lower_neon, cholesky_neon};

} // namespace

const KernelTable *neon_table() { return &table; }

} // namespace cwpcn::kernels
