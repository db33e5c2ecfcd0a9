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

#include "cwpcn/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

cwpcn::ScenarioConfig base_scenario(const std::string &config, const std::string &scenario_case,
                                    const std::string &itc)
{
    cwpcn::ScenarioConfig sc;
    if (!config.empty())
        sc = cwpcn::load_scenario(config);
    if (!scenario_case.empty())
    {
        sc.scenario = cwpcn::scenario_from_string(scenario_case);
        if (sc.scenario == cwpcn::ScenarioCase::Custom)
            throw std::invalid_argument("--case custom needs a layout in --config");
        sc.layout = cwpcn::layout_for(sc.scenario);
    }
    if (!itc.empty())
        sc.params.itc_convention = cwpcn::itc_convention_from_string(itc);
    sc.params.validate();
    return sc;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cluster-cooperative wireless powered network simulator"};
    app.require_subcommand(1);

    std::string scenario_case, schemes = "cc-center,cc-hap,hybrid,it", sweep = "pmax", values, out, itc, config;
    int placements = 20, fading = 50, threads = 0;
    std::uint64_t seed = 1;
    bool timing = false, quiet = false, full_psd = false;

    auto *sim = app.add_subcommand("simulate", "Monte Carlo sweep");
    sim->add_option("--case", scenario_case, "Primary-network layout")->check(CLI::IsMember({"1", "2", "3"}));
    sim->add_option("--schemes", schemes, "Comma-separated: cc-center,cc-hap,hybrid,it");
    sim->add_option("--sweep", sweep, "Swept parameter")->check(CLI::IsMember({"pmax", "imax", "n", "pp"}));
    sim->add_option("--values", values, "Comma-separated sweep values (imax in dBm); default grid if omitted");
    sim->add_option("--placements", placements, "WD placements")->check(CLI::PositiveNumber);
    sim->add_option("--fading", fading, "Fading realizations per placement")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "Base seed");
    sim->add_option("--out", out, "Output directory")->required();
    sim->add_option("--itc-convention", itc, "Interference gain of WD transmissions")
        ->check(CLI::IsMember({"paper", "receiver"}));
    sim->add_option("--config", config, "JSON parameter overrides");
    sim->add_option("--threads", threads, "Worker threads (default: CWPCN_THREADS or 1)")->check(CLI::NonNegativeNumber);
    sim->add_flag("--timing", timing, "Record wall time per solve in raw.csv");
    sim->add_flag("--full-psd", full_psd, "Optimize the full MxM beamforming matrix");
    sim->add_flag("-q,--quiet", quiet, "No progress output");

    std::string scheme = "cc-center";
    int placement = 0, fading_index = 0;
    auto *solve = app.add_subcommand("solve", "Solve one instance and print the result as JSON");
    solve->add_option("--case", scenario_case, "Primary-network layout")->check(CLI::IsMember({"1", "2", "3"}));
    solve->add_option("--scheme", scheme, "cc-center, cc-hap, hybrid or it");
    solve->add_option("--seed", seed, "Base seed");
    solve->add_option("--placement", placement, "Placement index")->check(CLI::NonNegativeNumber);
    solve->add_option("--fading-index", fading_index, "Fading index")->check(CLI::NonNegativeNumber);
    solve->add_option("--fading", fading, "Fading count of the matching simulate run")->check(CLI::PositiveNumber);
    solve->add_option("--itc-convention", itc, "Interference gain of WD transmissions")
        ->check(CLI::IsMember({"paper", "receiver"}));
    solve->add_option("--config", config, "JSON parameter overrides");
    solve->add_flag("--full-psd", full_psd, "Optimize the full MxM beamforming matrix");
    std::string debug_path;
    solve->add_option("--debug", debug_path, "Write the barrier schedule and final point as JSON");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sim->parsed())
        {
            cwpcn::ExperimentSpec spec;
            spec.scenario = base_scenario(config, scenario_case, itc);
            spec.schemes.clear();
            for (const auto &s : split_list(schemes))
                spec.schemes.push_back(cwpcn::scheme_from_string(s));
            spec.sweep = cwpcn::sweep_from_string(sweep);
            if (values.empty())
                spec.values = cwpcn::default_sweep_values(spec.sweep);
            else
            {
                spec.values.clear();
                for (const auto &v : split_list(values))
                    spec.values.push_back(std::stod(v));
            }
            spec.placements = placements;
            spec.fading = fading;
            spec.seed = seed;
            spec.out_dir = out;
            spec.record_timing = timing;
            spec.threads = threads;
            if (full_psd)
                spec.solver.psd_mode = cwpcn::PsdMode::FullMatrix;
            cwpcn::Progress progress;
            if (!quiet)
                progress = [](std::size_t d, std::size_t total) {
                    if (d == total || d % 50 == 0)
                        std::fprintf(stderr, "\r%zu/%zu trials", d, total);
                    if (d == total)
                        std::fprintf(stderr, "\n");
                };
            const auto res = cwpcn::run_sweep(spec, progress);
            for (const auto &row : res.aggregates)
                std::printf("%-6s %-10g %-9s maxmin %.6g (+-%.2g)  sum %.6g (+-%.2g)  n=%d failed=%d\n",
                            cwpcn::to_string(spec.sweep).c_str(), row.sweep_value,
                            cwpcn::to_string(row.scheme).c_str(), row.mean_maxmin, row.stderr_maxmin, row.mean_sum,
                            row.stderr_sum, row.count, row.failed);
            return 0;
        }

        const auto sc = base_scenario(config, scenario_case, itc);
        cwpcn::SolverConfig solver;
        if (full_psd)
            solver.psd_mode = cwpcn::PsdMode::FullMatrix;
        solver.debug_path = debug_path;
        const auto geometry = cwpcn::build_geometry(sc.resolved_layout(), cwpcn::placement_seed(seed, placement),
                                                    sc.params.num_wds, sc.cluster_radius, sc.hap_cluster_dist);
        cwpcn::Rng rng(cwpcn::fading_seed(seed, placement, fading_index, fading), 0x666164);
        const auto draw = cwpcn::sample_fading(geometry, sc.params, rng);
        const auto r =
            cwpcn::compare_schemes(geometry, draw, sc.params, solver, {cwpcn::scheme_from_string(scheme)}).front();
        nlohmann::json j = {{"scheme", cwpcn::to_string(r.scheme)},
                            {"status", cwpcn::to_string(r.status)},
                            {"maxmin_bps_hz", r.sbar},
                            {"sum_bps_hz", r.sum_rate},
                            {"rates_bps_hz", r.rates},
                            {"tau1", r.allocation.tau1},
                            {"newton_steps", r.stats.newton_steps},
                            {"wall_ms", r.stats.wall_ms},
                            {"constraints", cwpcn::to_json(r.constraints)}};
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    catch (const cwpcn::IoError &e)
    {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
