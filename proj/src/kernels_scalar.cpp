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

namespace cwpcn::kernels {
namespace {

double dot_scalar(std::span<const double> x, std::span<const double> y)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

void syr_lower_scalar(double alpha, std::span<const double> x, double *a, std::size_t lda)
{
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double s = alpha * x[i];
        if (s == 0.0)
            continue;
        double *row = a + i * lda;
        for (std::size_t j = 0; j <= i; ++j)
            row[j] += s * x[j];
    }
}

bool cholesky_scalar(double *a, std::size_t n, std::size_t lda)
{
    return detail::cholesky_left_looking(a, n, lda, dot_scalar);
}

const KernelTable table{Isa::Scalar, dot_scalar, axpy_scalar, syr_lower_scalar, cholesky_scalar};

} // namespace

const KernelTable &scalar_table() { return table; }

} // namespace cwpcn::kernels
