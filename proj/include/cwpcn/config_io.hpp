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

#include "cwpcn/model.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace cwpcn {

struct ScenarioConfig
{
    SystemParams params;
    ScenarioCase scenario = ScenarioCase::Case1;
    PrimaryLayout layout = layout_for(ScenarioCase::Case1); // used when scenario == Custom
    double cluster_radius = 3.0;                            // r [m]
    double hap_cluster_dist = 6.0;                          // d [m]

    PrimaryLayout resolved_layout() const
    {
        return scenario == ScenarioCase::Custom ? layout : layout_for(scenario);
    }
};

/// Reads keys that are present and keeps defaults for the rest. Unknown keys
/// are rejected. I_max may be given as itc_threshold_w or itc_threshold_dbm.
ScenarioConfig scenario_from_json(const nlohmann::json &j, ScenarioConfig base = {});
ScenarioConfig load_scenario(const std::string &path, ScenarioConfig base = {});

nlohmann::json to_json(const SystemParams &p);
nlohmann::json to_json(const ScenarioConfig &c);

std::string to_string(ItcConvention c);
ItcConvention itc_convention_from_string(const std::string &s);

} // namespace cwpcn
