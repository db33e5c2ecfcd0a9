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

#include "cwpcn/solver.hpp"

#include <string>
#include <vector>

namespace cwpcn {

enum class SchemeTag { CcCenter, CcHap, Hybrid, It };

std::string to_string(SchemeTag s);
SchemeTag scheme_from_string(const std::string &s);
const std::vector<SchemeTag> &all_schemes();

struct SchemeResult
{
    SchemeTag scheme = SchemeTag::CcCenter;
    double sbar = 0.0;
    std::vector<double> rates; // per physical WD index
    double sum_rate = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    SolveStats stats;
    SchemeAllocation allocation;
    ConstraintReport constraints;
};

/// Cluster cooperation with the realization's label 0 as CH.
SchemeResult solve_cooperative(const ChannelRealization &ch, const SystemParams &params,
                               const SolverConfig &config = {}, SchemeTag tag = SchemeTag::CcCenter);

/// Every WD sends its own data straight to the HAP in its own slot.
SchemeResult solve_independent(const ChannelRealization &ch, const SystemParams &params,
                               const SolverConfig &config = {});

/// CMs with h_i > g_i go direct; the rest are relayed by the CH (label 0).
SchemeResult solve_hybrid(const ChannelRealization &ch, const SystemParams &params, const SolverConfig &config = {});

/// direct[i] for each label; label 0 is always true, ties go to cooperation.
std::vector<bool> hybrid_direct_group(const std::vector<double> &h, const std::vector<double> &g);

/// Runs the requested schemes on one shared fading draw. CC-center, Hybrid
/// and IT use the CH closest to the cluster center, CC-HAP the WD closest to
/// the HAP.
std::vector<SchemeResult> compare_schemes(const NetworkGeometry &geometry, const FadingDraw &draw,
                                          const SystemParams &params, const SolverConfig &config = {},
                                          const std::vector<SchemeTag> &schemes = all_schemes());

} // namespace cwpcn
