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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Dense real kernels used by the Newton systems of the barrier solver.
//
// Every kernel has a scalar reference implementation. Vector variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled when the toolchain
// supports them and picked at runtime. The variants are not bit-identical to
// the reference because of reassociation; tests bound the difference.
//
// Matrices are row-major with an explicit leading dimension. Only the lower
// triangle of symmetric matrices is read or written.

namespace cwpcn::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable
{
    Isa isa;

    double (*dot)(std::span<const double> x, std::span<const double> y);

    // y += alpha * x
    void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);

    // A[lower] += alpha * x x^T, A is n x n with leading dimension lda.
    void (*syr_lower)(double alpha, std::span<const double> x, double *a, std::size_t lda);

    // In-place lower Cholesky factor. Returns false if a pivot is not
    // strictly positive; the matrix is then left partially overwritten.
    bool (*cholesky)(double *a, std::size_t n, std::size_t lda);
};

const KernelTable &scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable *avx2_table();
const KernelTable *neon_table();

// Selection order: CWPCN_SIMD environment variable ("scalar", "avx2",
// "neon", "auto"), then the best variant the CPU supports. Resolved once.
const KernelTable &active();

// Every table usable on this machine, reference first.
std::vector<const KernelTable *> available_tables();

// Solves L L^T x = b in place given the factor produced by `cholesky`.
void cholesky_solve(const KernelTable &k, const double *l, std::size_t n, std::size_t lda,
                    std::span<double> b);

} // namespace cwpcn::kernels
