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

#include "cwpcn/kernels.hpp"
#include "cwpcn/model.hpp"

#include <string>
#include <vector>

// Log-barrier interior-point method for
//
//   minimize   c^T v
//   subject to a_r^T v <= b_r                                (linear rows)
//              sum_k tau_k log2(1 + rho_k x_k / tau_k) - s v[sbar] >= target
//              X(v) = sum_p v[off + p] B_p  is Hermitian PD   (one PSD block)
//
// with a damped Newton inner loop. The PSD block is a k x k Hermitian matrix
// stored as k^2 reals: the diagonal first, then (re, im) for each pair j < l.

namespace cwpcn::barrier {

struct SparseRow
{
    std::vector<int> idx;
    std::vector<double> coef;
    double rhs = 0.0;
};

struct PerspTerm
{
    int tau = -1;
    int x = -1;
    double rho = 0.0;
};

struct RateRow
{
    std::vector<PerspTerm> terms;
    int sbar = -1; // -1: no epigraph variable
    double target = 0.0;
};

struct Problem
{
    int n = 0;
    std::vector<double> c;
    std::vector<SparseRow> linear;
    std::vector<RateRow> rates;
    int psd_offset = -1; // -1: no PSD block
    int psd_dim = 0;

    int barrier_weight() const
    {
        return static_cast<int>(linear.size() + rates.size()) + (psd_offset >= 0 ? psd_dim : 0);
    }
};

struct Options
{
    double t0 = 0.0;          // 0: m / max(|c^T v0|, 1)
    double growth = 10.0;
    double newton_tol = 1e-9; // on lambda^2 / 2
    double gap_abs = 1e-30;
    double gap_rel = 1e-9;
    int max_outer = 60;
    int max_inner = 200;
    double armijo_beta = 0.5;
    double armijo_sigma = 0.1;
    double step_fraction = 0.99;
    bool record_trace = false;
};

enum class Status { Converged, MaxIter, Stalled, InfeasibleStart };

std::string to_string(Status s);

struct TraceEntry
{
    double t = 0.0;
    int newton_steps = 0;
    double objective = 0.0;
    double gap = 0.0;
    double min_linear_slack = 0.0;
};

struct Result
{
    std::vector<double> v;
    Status status = Status::MaxIter;
    int outer_iterations = 0;
    int newton_steps = 0;
    double t = 0.0;
    double gap = 0.0;
    double objective = 0.0; // c'v at the returned point
    std::vector<TraceEntry> trace;
};

Result minimize(const Problem &problem, std::vector<double> v0, const Options &options,
                const kernels::KernelTable &kernels = kernels::active());

/// First point where every barrier term is finite, or a description of the
/// first violated constraint.
std::string check_strict_interior(const Problem &problem, const std::vector<double> &v);

// Hermitian parametrization helpers.
int psd_param_count(int k);
cmat hermitian_from_params(int k, const double *params);
std::vector<double> params_from_hermitian(const cmat &X);
/// Coefficients w with u^H X u = w . params.
std::vector<double> quad_form_coeffs(const cvec &u);
/// Coefficients w with tr(X) = w . params.
std::vector<double> trace_coeffs(int k);

} // namespace cwpcn::barrier
