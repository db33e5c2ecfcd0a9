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

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace cwpcn::kernels::detail {

// Left-looking Cholesky; row i of L is contiguous, so the inner products
// L[i,0:j] . L[j,0:j] map onto the table's dot kernel.
template <class Dot>
bool cholesky_left_looking(double *a, std::size_t n, std::size_t lda, Dot dot)
{
    for (std::size_t j = 0; j < n; ++j)
    {
        double *row_j = a + j * lda;
        const double d = row_j[j] - dot(std::span<const double>(row_j, j), std::span<const double>(row_j, j));
        if (!(d > 0.0) || !std::isfinite(d))
            return false;
        const double ljj = std::sqrt(d);
        row_j[j] = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            double *row_i = a + i * lda;
            row_i[j] = (row_i[j] - dot(std::span<const double>(row_i, j), std::span<const double>(row_j, j))) * inv;
        }
    }
    return true;
}

} // namespace cwpcn::kernels::detail
