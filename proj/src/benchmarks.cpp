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

#include "cwpcn/benchmarks.hpp"

#include <stdexcept>

namespace cwpcn {

namespace {

SchemeResult run(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config,
                 SchemeLayout layout, SchemeTag tag)
{
    params.validate();
    const SchemeModel model(ch, params, std::move(layout), config.psd_mode, config.tau_floor);
    const SchemeSolve s = solve_scheme_max_min(model, config);
    SchemeResult r;
    r.scheme = tag;
    r.status = s.status;
    r.stats = s.stats;
    r.sbar = s.point.sbar;
    r.allocation = model.allocation(s.point);
    const auto ev = evaluate_scheme(r.allocation, ch, params);
    r.constraints = ev.constraints;
    if (r.status == SolveStatus::Optimal && !ev.constraints.feasible())
        r.status = SolveStatus::MaxIter;
    r.rates.assign(ev.rates.size(), 0.0);
    for (std::size_t i = 0; i < ev.rates.size(); ++i)
        r.rates[static_cast<std::size_t>(ch.wd_index[i])] = ev.rates[i];
    r.sum_rate = ev.sum_rate;
    return r;
}

} // namespace

std::string to_string(SchemeTag s)
{
    switch (s)
    {
    case SchemeTag::CcCenter: return "cc-center";
    case SchemeTag::CcHap: return "cc-hap";
    case SchemeTag::Hybrid: return "hybrid";
    case SchemeTag::It: return "it";
    }
    return "unknown";
}

SchemeTag scheme_from_string(const std::string &s)
{
    for (auto t : all_schemes())
        if (to_string(t) == s)
            return t;
    throw std::invalid_argument("unknown scheme: " + s);
}

const std::vector<SchemeTag> &all_schemes()
{
    static const std::vector<SchemeTag> v = {SchemeTag::CcCenter, SchemeTag::CcHap, SchemeTag::Hybrid,
                                             SchemeTag::It};
    return v;
}

std::vector<bool> hybrid_direct_group(const std::vector<double> &h, const std::vector<double> &g)
{
    if (h.size() != g.size())
        throw std::invalid_argument("hybrid_direct_group: size mismatch");
    std::vector<bool> direct(h.size(), false);
    for (std::size_t i = 0; i < h.size(); ++i)
        direct[i] = i == 0 || h[i] > g[i];
    return direct;
}

SchemeResult solve_cooperative(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config,
                               SchemeTag tag)
{
    return run(ch, params, config, SchemeLayout::cooperative(ch.num_wds), tag);
}

SchemeResult solve_independent(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config)
{
    return run(ch, params, config, SchemeLayout::independent(ch.num_wds), SchemeTag::It);
}

SchemeResult solve_hybrid(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config)
{
    SchemeLayout l;
    l.direct = hybrid_direct_group(ch.h, ch.g);
    return run(ch, params, config, std::move(l), SchemeTag::Hybrid);
}

std::vector<SchemeResult> compare_schemes(const NetworkGeometry &geometry, const FadingDraw &draw,
                                          const SystemParams &params, const SolverConfig &config,
                                          const std::vector<SchemeTag> &schemes)
{
    const auto center = realize(draw, select_cluster_head(geometry, ChRule::ClosestToCenter));
    std::vector<SchemeResult> out;
    for (auto tag : schemes)
    {
        switch (tag)
        {
        case SchemeTag::CcCenter: out.push_back(solve_cooperative(center, params, config, tag)); break;
        case SchemeTag::CcHap: {
            const auto hap = realize(draw, select_cluster_head(geometry, ChRule::ClosestToHap));
            out.push_back(solve_cooperative(hap, params, config, tag));
            break;
        }
        case SchemeTag::Hybrid: out.push_back(solve_hybrid(center, params, config)); break;
        case SchemeTag::It: out.push_back(solve_independent(center, params, config)); break;
        }
    }
    return out;
}

} // namespace cwpcn
