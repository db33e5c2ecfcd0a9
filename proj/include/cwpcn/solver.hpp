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

#include "cwpcn/scheme_model.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cwpcn {

struct SolverConfig
{
    double initial_t = 0.0;    // 0: derived from the starting point
    double growth = 10.0;
    double newton_tol = 1e-9;  // lambda^2 / 2
    double gap_rel = 1e-9;
    double gap_abs = 1e-30;
    int max_outer = 60;
    int max_inner = 200;
    double tau_floor = 1e-9;
    PsdMode psd_mode = PsdMode::ReducedSpan;
    double bisection_tol = 1e-7; // relative, on sbar
    bool debug = false;          // fill Solution::debug
    std::string debug_path;      // also write it here when non-empty
    const kernels::KernelTable *kernels = nullptr; // nullptr: kernels::active()

    void validate() const;
    barrier::Options barrier_options() const;
};

enum class SolveStatus { Optimal, MaxIter, Infeasible };

std::string to_string(SolveStatus s);

struct SolveStats
{
    int outer_iterations = 0;
    int newton_steps = 0;
    int bisection_steps = 0;
    double final_t = 0.0;
    double gap = 0.0;
    double wall_ms = 0.0;
};

/// Scheme-level result in model coordinates.
struct SchemeSolve
{
    SchemeModel::Point point;
    SolveStatus status = SolveStatus::MaxIter;
    SolveStats stats;
    nlohmann::json debug;
};

SchemeSolve solve_scheme_max_min(const SchemeModel &model, const SolverConfig &config);
SchemeSolve solve_scheme_bisection(const SchemeModel &model, const SolverConfig &config);

struct MinTimeResult
{
    bool solved = false;
    double min_time = 0.0;
    SchemeModel::Point point;
};

/// Smallest total duration serving every WD at rate >= target.
MinTimeResult solve_min_time(const SchemeModel &model, double target, const SolverConfig &config);

struct Solution
{
    TransformedPoint point;
    ResourceAllocation allocation;
    double sbar = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    SolveStats stats;
    ConstraintReport residuals;
    nlohmann::json debug;
};

/// Cluster-cooperation max-min throughput, CH = label 0 of the realization.
Solution solve_max_min(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config = {});

/// Same problem solved as a sequence of min-time feasibility programs.
Solution solve_by_bisection(const ChannelRealization &ch, const SystemParams &params,
                            const SolverConfig &config = {});

struct Feasibility
{
    bool feasible = false;
    std::optional<TransformedPoint> witness;
};

Feasibility feasibility_at(double sbar, const ChannelRealization &ch, const SystemParams &params,
                           const SolverConfig &config = {});

struct Verification
{
    bool passed = false;
    std::vector<std::string> failures;
    ConstraintReport transformed;
    ConstraintReport original;
    double evaluated_min_rate = 0.0;
    std::vector<double> activity_gap; // per label, min rate-row slack
};

Verification verify_solution(const Solution &solution, const ChannelRealization &ch, const SystemParams &params);

/// Grid-search reference for M = 1, N <= 2 (cluster cooperation). Throws
/// std::invalid_argument outside that range or for grid < 100.
double brute_force_oracle(const ChannelRealization &ch, const SystemParams &params, int grid = 200);

/// Same for independent transmission.
double brute_force_oracle_independent(const ChannelRealization &ch, const SystemParams &params, int grid = 200);

nlohmann::json to_json(const Solution &s);

} // namespace cwpcn
