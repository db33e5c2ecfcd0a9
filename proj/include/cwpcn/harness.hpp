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

#include "cwpcn/benchmarks.hpp"
#include "cwpcn/config_io.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwpcn {

enum class SweepVar { Pmax, Imax, N, Pp };

std::string to_string(SweepVar v);
SweepVar sweep_from_string(const std::string &s);
std::vector<double> default_sweep_values(SweepVar v);

/// Parameters for one sweep point. Imax values are in dBm.
SystemParams apply_sweep(const SystemParams &base, SweepVar var, double value);

struct ExperimentSpec
{
    ScenarioConfig scenario;
    std::vector<SchemeTag> schemes = all_schemes();
    SweepVar sweep = SweepVar::Pmax;
    std::vector<double> values = default_sweep_values(SweepVar::Pmax);
    int placements = 20;
    int fading = 50;
    std::uint64_t seed = 1;
    std::string out_dir;  // empty: nothing written
    bool record_timing = false;
    int threads = 0;      // 0: CWPCN_THREADS or 1
    SolverConfig solver;

    void validate() const;
};

struct TrialRecord
{
    double sweep_value = 0.0;
    int placement = 0;
    int fading = 0;
    SchemeTag scheme = SchemeTag::CcCenter;
    double maxmin = 0.0;
    double sum_rate = 0.0;
    std::vector<double> rates;
    SolveStatus status = SolveStatus::MaxIter;
    double wall_ms = 0.0;
};

struct AggregateRow
{
    double sweep_value = 0.0;
    SchemeTag scheme = SchemeTag::CcCenter;
    int count = 0;  // Optimal records
    int failed = 0; // everything else
    double mean_maxmin = 0.0;
    double stderr_maxmin = 0.0;
    double mean_sum = 0.0;
    double stderr_sum = 0.0;
};

struct SweepResult
{
    std::vector<TrialRecord> records; // (value, placement, fading, scheme) order
    std::vector<AggregateRow> aggregates;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t placement_seed(std::uint64_t base, int placement);
std::uint64_t fading_seed(std::uint64_t base, int placement, int fading, int fading_count);

/// All schemes on one (placement, fading) pair. Never throws on solver
/// trouble; the status carries it.
std::vector<TrialRecord> run_trial(const ScenarioConfig &resolved, const std::vector<SchemeTag> &schemes,
                                   const SolverConfig &solver, std::uint64_t placement_seed,
                                   std::uint64_t fading_seed, double sweep_value, int placement, int fading,
                                   bool record_timing);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every trial, aggregates, and writes raw.csv, rates.csv,
/// aggregate.csv and run.json when out_dir is set. The output directory is
/// created and probed before any solve; failure raises IoError.
SweepResult run_sweep(const ExperimentSpec &spec, const Progress &progress = {});

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord> &records, const std::vector<double> &values,
                                    const std::vector<SchemeTag> &schemes);

int resolve_threads(int requested);

void prepare_output_dir(const std::string &dir);
void write_raw_csv(const std::string &path, const std::vector<TrialRecord> &records);
void write_rates_csv(const std::string &path, const std::vector<TrialRecord> &records);
void write_aggregate_csv(const std::string &path, const std::vector<AggregateRow> &rows);
std::vector<TrialRecord> read_raw_csv(const std::string &path);
std::vector<AggregateRow> read_aggregate_csv(const std::string &path);

nlohmann::json to_json(const ExperimentSpec &spec);

} // namespace cwpcn
