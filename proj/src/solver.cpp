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

#include "cwpcn/solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cwpcn {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

const kernels::KernelTable &table(const SolverConfig &c) { return c.kernels ? *c.kernels : kernels::active(); }

nlohmann::json trace_json(const std::vector<barrier::TraceEntry> &trace)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto &e : trace)
        j.push_back({{"t", e.t},
                     {"newton_steps", e.newton_steps},
                     {"objective", e.objective},
                     {"gap", e.gap},
                     {"min_linear_slack", e.min_linear_slack}});
    return j;
}

void write_debug(const SolverConfig &config, const nlohmann::json &j)
{
    if (config.debug_path.empty())
        return;
    std::ofstream f(config.debug_path);
    if (!f)
        throw std::runtime_error("cannot write debug dump: " + config.debug_path);
    f << j.dump(2) << '\n';
}

SolveStatus map_status(const barrier::Result &r)
{
    switch (r.status)
    {
    case barrier::Status::Converged: return SolveStatus::Optimal;
    case barrier::Status::Stalled:
        // numerical floor reached; accept if the gap is already tiny
        return r.gap <= 1e-7 * std::abs(r.objective) ? SolveStatus::Optimal : SolveStatus::MaxIter;
    case barrier::Status::MaxIter: return SolveStatus::MaxIter;
    case barrier::Status::InfeasibleStart: return SolveStatus::Infeasible;
    }
    return SolveStatus::MaxIter;
}

Solution to_solution(const SchemeModel &model, const SchemeSolve &s, const ChannelRealization &ch,
                     const SystemParams &params, const SolverConfig &config)
{
    Solution out;
    out.point = model.transformed(s.point);
    out.sbar = s.point.sbar;
    out.status = s.status;
    out.stats = s.stats;
    out.debug = s.debug;
    out.residuals = transformed_residuals(out.point, ch, params, 1e-8);
    try
    {
        out.allocation = recover_allocation(out.point, params);
    }
    catch (const InconsistentPoint &)
    {
        out.allocation = ResourceAllocation::zeros(ch.num_wds, ch.antennas);
        if (out.status == SolveStatus::Optimal)
            out.status = SolveStatus::MaxIter;
    }
    if (out.status == SolveStatus::Optimal && !out.residuals.feasible())
        out.status = SolveStatus::MaxIter;
    if (config.debug || !config.debug_path.empty())
    {
        out.debug["point"] = to_json(out.point);
        out.debug["residuals"] = to_json(out.residuals);
        out.debug["status"] = to_string(out.status);
        write_debug(config, out.debug);
    }
    return out;
}

} // namespace

void SolverConfig::validate() const
{
    if (!(growth > 1.0))
        throw std::invalid_argument("SolverConfig: growth must be > 1");
    if (!(newton_tol > 0.0) || !(gap_rel > 0.0) || !(gap_abs > 0.0) || !(bisection_tol > 0.0))
        throw std::invalid_argument("SolverConfig: tolerances must be > 0");
    if (!(tau_floor > 0.0) || tau_floor > 1e-6)
        throw std::invalid_argument("SolverConfig: tau_floor must be in (0, 1e-6]");
    if (max_outer < 1 || max_inner < 1)
        throw std::invalid_argument("SolverConfig: iteration limits must be >= 1");
    if (initial_t < 0.0)
        throw std::invalid_argument("SolverConfig: initial_t must be >= 0");
}

barrier::Options SolverConfig::barrier_options() const
{
    barrier::Options o;
    o.t0 = initial_t;
    o.growth = growth;
    o.newton_tol = newton_tol;
    o.gap_abs = gap_abs;
    o.gap_rel = gap_rel;
    o.max_outer = max_outer;
    o.max_inner = max_inner;
    o.record_trace = debug || !debug_path.empty();
    return o;
}

std::string to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

SchemeSolve solve_scheme_max_min(const SchemeModel &model, const SolverConfig &config)
{
    config.validate();
    const auto t0 = clock_type::now();
    SchemeSolve out;
    out.point = model.zero_point();
    switch (model.trivial())
    {
    case SchemeModel::Trivial::ZeroOptimum:
        out.status = SolveStatus::Optimal;
        out.stats.wall_ms = elapsed_ms(t0);
        return out;
    case SchemeModel::Trivial::Infeasible:
        out.status = SolveStatus::Infeasible;
        out.stats.wall_ms = elapsed_ms(t0);
        return out;
    case SchemeModel::Trivial::None: break;
    }
    const auto start = model.max_min_start();
    if (!start)
    {
        out.status = SolveStatus::Infeasible;
        out.stats.wall_ms = elapsed_ms(t0);
        return out;
    }
    const auto problem = model.max_min_problem();
    const auto r = barrier::minimize(problem, *start, config.barrier_options(), table(config));
    out.status = map_status(r);
    out.point = model.decode(r.v, true);
    model.clean(out.point);
    out.stats.outer_iterations = r.outer_iterations;
    out.stats.newton_steps = r.newton_steps;
    out.stats.final_t = r.t;
    out.stats.gap = r.gap;
    if (config.debug || !config.debug_path.empty())
        out.debug = {{"method", "barrier"},
                     {"barrier_status", barrier::to_string(r.status)},
                     {"variables", problem.n},
                     {"barrier_weight", problem.barrier_weight()},
                     {"psd_dim", model.psd_dim()},
                     {"schedule", trace_json(r.trace)},
                     {"sbar", out.point.sbar}};
    write_debug(config, out.debug);
    out.stats.wall_ms = elapsed_ms(t0);
    return out;
}

MinTimeResult solve_min_time(const SchemeModel &model, double target, const SolverConfig &config)
{
    MinTimeResult out;
    out.point = model.zero_point();
    if (model.trivial() != SchemeModel::Trivial::None)
        return out;
    const auto start = model.min_time_start(target);
    if (!start)
        return out;
    const auto problem = model.min_time_problem(target);
    const auto r = barrier::minimize(problem, *start, config.barrier_options(), table(config));
    if (map_status(r) != SolveStatus::Optimal)
        return out;
    out.solved = true;
    out.point = model.decode(r.v, false);
    out.min_time = out.point.tau1;
    for (double t : out.point.tau)
        out.min_time += t;
    return out;
}

SchemeSolve solve_scheme_bisection(const SchemeModel &model, const SolverConfig &config)
{
    config.validate();
    const auto t0 = clock_type::now();
    SchemeSolve out;
    out.point = model.zero_point();
    if (model.trivial() != SchemeModel::Trivial::None)
    {
        out.status = model.trivial() == SchemeModel::Trivial::Infeasible ? SolveStatus::Infeasible
                                                                          : SolveStatus::Optimal;
        out.stats.wall_ms = elapsed_ms(t0);
        return out;
    }
    const double budget = model.time_budget();
    double lo = 0.0;
    double hi = model.upper_bound() * 1.01 + 1e-300;
    SchemeModel::Point witness = model.zero_point();
    nlohmann::json steps = nlohmann::json::array();
    const bool record = config.debug || !config.debug_path.empty();
    while (hi - lo > config.bisection_tol * hi && out.stats.bisection_steps < 200)
    {
        const double mid = 0.5 * (lo + hi);
        const auto r = solve_min_time(model, mid, config);
        const bool ok = r.solved && r.min_time <= budget;
        if (ok)
        {
            lo = mid;
            witness = r.point;
        }
        else
            hi = mid;
        ++out.stats.bisection_steps;
        if (record)
            steps.push_back({{"sbar", mid}, {"min_time", r.min_time}, {"feasible", ok}});
    }
    witness.sbar = lo;
    model.clean(witness);
    out.point = witness;
    out.status = SolveStatus::Optimal;
    out.stats.gap = hi - lo;
    if (record)
        out.debug = {{"method", "bisection"}, {"steps", steps}, {"bracket", {lo, hi}}};
    write_debug(config, out.debug);
    out.stats.wall_ms = elapsed_ms(t0);
    return out;
}

Solution solve_max_min(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config)
{
    params.validate();
    const SchemeModel model(ch, params, SchemeLayout::cooperative(ch.num_wds), config.psd_mode, config.tau_floor);
    return to_solution(model, solve_scheme_max_min(model, config), ch, params, config);
}

Solution solve_by_bisection(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config)
{
    params.validate();
    const SchemeModel model(ch, params, SchemeLayout::cooperative(ch.num_wds), config.psd_mode, config.tau_floor);
    return to_solution(model, solve_scheme_bisection(model, config), ch, params, config);
}

Feasibility feasibility_at(double sbar, const ChannelRealization &ch, const SystemParams &params,
                           const SolverConfig &config)
{
    if (sbar < 0.0)
        throw std::invalid_argument("feasibility_at: sbar must be >= 0");
    params.validate();
    config.validate();
    const SchemeModel model(ch, params, SchemeLayout::cooperative(ch.num_wds), config.psd_mode, config.tau_floor);
    Feasibility out;
    if (model.trivial() == SchemeModel::Trivial::Infeasible)
        return out;
    if (sbar == 0.0)
    {
        out.feasible = true;
        out.witness = model.transformed(model.zero_point());
        return out;
    }
    const auto r = solve_min_time(model, sbar, config);
    if (r.solved && r.min_time <= model.time_budget())
    {
        out.feasible = true;
        auto p = r.point;
        p.sbar = sbar;
        out.witness = model.transformed(p);
    }
    return out;
}

Verification verify_solution(const Solution &s, const ChannelRealization &ch, const SystemParams &params)
{
    Verification v;
    v.transformed = transformed_residuals(s.point, ch, params, 1e-8);
    if (!v.transformed.feasible())
        for (const auto &c : v.transformed.violations())
            v.failures.push_back("transformed residual " + c.name);

    try
    {
        const auto alloc = recover_allocation(s.point, params);
        v.original = check_feasibility(alloc, ch, params);
        if (!v.original.feasible())
            for (const auto &c : v.original.violations())
                v.failures.push_back("recovered allocation violates " + c.name);
        v.evaluated_min_rate = evaluate(alloc, ch, params, Evaluation::Unchecked).min_rate;
        if (std::abs(v.evaluated_min_rate - s.sbar) > 1e-6 * std::max(std::abs(s.sbar), 1e-12))
            v.failures.push_back("evaluated min rate differs from sbar");
    }
    catch (const InconsistentPoint &e)
    {
        v.failures.push_back(e.what());
    }

    const auto coef = rate_coefficients(ch, params);
    const int n = ch.num_wds;
    v.activity_gap.assign(static_cast<std::size_t>(n), 0.0);
    v.activity_gap[0] = perspective_rate(s.point.tau3[0], s.point.theta[0], coef.rho0) - s.sbar;
    for (int i = 1; i < n; ++i)
    {
        const double r2 = perspective_rate(s.point.tau2[i], s.point.psi[i], coef.rho_bar[i]);
        const double vv = perspective_rate(s.point.tau2[i], s.point.psi[i], coef.rho[i]) +
                          perspective_rate(s.point.tau3[i], s.point.theta[i], coef.rho0);
        v.activity_gap[i] = std::min(r2, vv) - s.sbar;
    }
    for (int i = 0; i < n; ++i)
        if (v.activity_gap[i] > 1e-5)
            v.failures.push_back("no active rate constraint for label " + std::to_string(i));
    v.passed = v.failures.empty();
    return v;
}

nlohmann::json to_json(const Solution &s)
{
    return {{"status", to_string(s.status)},
            {"sbar", s.sbar},
            {"point", to_json(s.point)},
            {"stats",
             {{"outer_iterations", s.stats.outer_iterations},
              {"newton_steps", s.stats.newton_steps},
              {"bisection_steps", s.stats.bisection_steps},
              {"final_t", s.stats.final_t},
              {"gap", s.stats.gap},
              {"wall_ms", s.stats.wall_ms}}},
            {"residuals", to_json(s.residuals)}};
}

} // namespace cwpcn
