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

#include "cwpcn/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace cwpcn {

namespace {

double finite_or_inf(const nlohmann::json &v)
{
    if (v.is_null())
        return std::numeric_limits<double>::infinity();
    if (v.is_string() && (v == "inf" || v == "infinity"))
        return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

Vec2 vec2_from(const nlohmann::json &v)
{
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument("expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

std::string to_string(ItcConvention c)
{
    return c == ItcConvention::ToReceiver ? "receiver" : "paper";
}

ItcConvention itc_convention_from_string(const std::string &s)
{
    if (s == "receiver")
        return ItcConvention::ToReceiver;
    if (s == "paper")
        return ItcConvention::PaperLiteral;
    throw std::invalid_argument("unknown ITC convention: " + s);
}

ScenarioConfig scenario_from_json(const nlohmann::json &j, ScenarioConfig c)
{
    static const std::set<std::string> known = {
        "noise_power",     "harvest_efficiency", "primary_tx_power", "hap_tx_power",  "itc_threshold_w",
        "itc_threshold_dbm", "ce_duration",      "antennas",         "num_wds",       "circuit_energy",
        "battery_init",    "battery_cap",        "carrier_freq",     "antenna_gain",  "pathloss_exp",
        "itc_convention",  "antenna_variance",   "case",             "layout",        "cluster_radius",
        "hap_cluster_dist"};
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    for (const auto &[k, v] : j.items())
        if (!known.count(k))
            throw std::invalid_argument("unknown config key: " + k);
    if (j.contains("itc_threshold_w") && j.contains("itc_threshold_dbm"))
        throw std::invalid_argument("give itc_threshold_w or itc_threshold_dbm, not both");

    SystemParams &p = c.params;
    auto num = [&](const char *key, double &dst) {
        if (j.contains(key))
            dst = j.at(key).get<double>();
    };
    num("noise_power", p.noise_power);
    num("harvest_efficiency", p.harvest_efficiency);
    num("primary_tx_power", p.primary_tx_power);
    num("hap_tx_power", p.hap_tx_power);
    num("itc_threshold_w", p.itc_threshold);
    if (j.contains("itc_threshold_dbm"))
        p.itc_threshold = dbm_to_watt(j.at("itc_threshold_dbm").get<double>());
    num("ce_duration", p.ce_duration);
    num("carrier_freq", p.carrier_freq);
    num("antenna_gain", p.antenna_gain);
    num("pathloss_exp", p.pathloss_exp);
    num("cluster_radius", c.cluster_radius);
    num("hap_cluster_dist", c.hap_cluster_dist);
    if (j.contains("antennas"))
        p.antennas = j.at("antennas").get<int>();
    if (j.contains("num_wds"))
        p.num_wds = j.at("num_wds").get<int>();
    if (j.contains("circuit_energy"))
        p.circuit_energy = j.at("circuit_energy").get<std::vector<double>>();
    if (j.contains("battery_init"))
        p.battery_init = j.at("battery_init").get<std::vector<double>>();
    if (j.contains("battery_cap"))
        p.battery_cap = finite_or_inf(j.at("battery_cap"));
    if (j.contains("itc_convention"))
        p.itc_convention = itc_convention_from_string(j.at("itc_convention").get<std::string>());
    if (j.contains("antenna_variance"))
    {
        const auto s = j.at("antenna_variance").get<std::string>();
        if (s == "per_entry")
            p.antenna_variance = AntennaVariance::PerEntry;
        else if (s == "total_power")
            p.antenna_variance = AntennaVariance::TotalPower;
        else
            throw std::invalid_argument("unknown antenna_variance: " + s);
    }
    if (j.contains("case"))
    {
        const auto &v = j.at("case");
        c.scenario = v.is_number() ? scenario_from_string(std::to_string(v.get<int>()))
                                   : scenario_from_string(v.get<std::string>());
        if (c.scenario != ScenarioCase::Custom)
            c.layout = layout_for(c.scenario);
    }
    if (j.contains("layout"))
    {
        const auto &l = j.at("layout");
        c.layout.pt = vec2_from(l.at("pt"));
        c.layout.pr = vec2_from(l.at("pr"));
        c.layout.hap = vec2_from(l.at("hap"));
        c.scenario = ScenarioCase::Custom;
    }
    p.validate();
    if (!(c.cluster_radius > 0.0) || !(c.hap_cluster_dist >= 0.0))
        throw std::invalid_argument("cluster_radius must be > 0 and hap_cluster_dist >= 0");
    return c;
}

ScenarioConfig load_scenario(const std::string &path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    return scenario_from_json(j, std::move(base));
}

nlohmann::json to_json(const SystemParams &p)
{
    nlohmann::json j = {{"noise_power", p.noise_power},
                        {"harvest_efficiency", p.harvest_efficiency},
                        {"primary_tx_power", p.primary_tx_power},
                        {"hap_tx_power", p.hap_tx_power},
                        {"itc_threshold_w", p.itc_threshold},
                        {"itc_threshold_dbm", watt_to_dbm(p.itc_threshold)},
                        {"ce_duration", p.ce_duration},
                        {"antennas", p.antennas},
                        {"num_wds", p.num_wds},
                        {"circuit_energy", p.circuit_energy},
                        {"battery_init", p.battery_init},
                        {"carrier_freq", p.carrier_freq},
                        {"antenna_gain", p.antenna_gain},
                        {"pathloss_exp", p.pathloss_exp},
                        {"itc_convention", to_string(p.itc_convention)},
                        {"antenna_variance",
                         p.antenna_variance == AntennaVariance::PerEntry ? "per_entry" : "total_power"}};
    j["battery_cap"] = std::isfinite(p.battery_cap) ? nlohmann::json(p.battery_cap) : nlohmann::json("inf");
    return j;
}

nlohmann::json to_json(const ScenarioConfig &c)
{
    nlohmann::json j = to_json(c.params);
    j["case"] = to_string(c.scenario);
    j["layout"] = {{"pt", {c.layout.pt.x, c.layout.pt.y}},
                   {"pr", {c.layout.pr.x, c.layout.pr.y}},
                   {"hap", {c.layout.hap.x, c.layout.hap.y}}};
    j["cluster_radius"] = c.cluster_radius;
    j["hap_cluster_dist"] = c.hap_cluster_dist;
    return j;
}

} // namespace cwpcn
