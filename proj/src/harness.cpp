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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace cwpcn {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write " + path);
    return f;
}

void close_out(std::ofstream &f, const std::string &path)
{
    f.close();
    if (!f)
        throw IoError("write failed: " + path);
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

SolveStatus status_from_string(const std::string &s)
{
    for (auto st : {SolveStatus::Optimal, SolveStatus::MaxIter, SolveStatus::Infeasible})
        if (to_string(st) == s)
            return st;
    throw std::invalid_argument("unknown status: " + s);
}

void mean_stderr(const std::vector<double> &x, double &mean, double &se)
{
    mean = 0.0;
    se = 0.0;
    if (x.empty())
        return;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(x.size());
    if (x.size() < 2)
        return;
    double ss = 0.0;
    for (double v : x)
        ss += (v - mean) * (v - mean);
    se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

} // namespace

std::string to_string(SweepVar v)
{
    switch (v)
    {
    case SweepVar::Pmax: return "pmax";
    case SweepVar::Imax: return "imax";
    case SweepVar::N: return "n";
    case SweepVar::Pp: return "pp";
    }
    return "unknown";
}

SweepVar sweep_from_string(const std::string &s)
{
    for (auto v : {SweepVar::Pmax, SweepVar::Imax, SweepVar::N, SweepVar::Pp})
        if (to_string(v) == s)
            return v;
    throw std::invalid_argument("unknown sweep variable: " + s);
}

std::vector<double> default_sweep_values(SweepVar v)
{
    switch (v)
    {
    case SweepVar::Pmax: return {0.5, 1, 2, 3, 4, 5};
    case SweepVar::Imax: return {-80, -75, -70, -65, -60, -55, -50};
    case SweepVar::N: return {15, 20, 25, 30};
    case SweepVar::Pp: return {0.1, 1};
    }
    return {};
}

SystemParams apply_sweep(const SystemParams &base, SweepVar var, double value)
{
    SystemParams p = base;
    switch (var)
    {
    case SweepVar::Pmax: p.hap_tx_power = value; break;
    case SweepVar::Imax: p.itc_threshold = dbm_to_watt(value); break;
    case SweepVar::N:
        if (value != std::floor(value) || value < 1)
            throw std::invalid_argument("N sweep values must be positive integers");
        p.num_wds = static_cast<int>(value);
        break;
    case SweepVar::Pp: p.primary_tx_power = value; break;
    }
    p.validate();
    return p;
}

void ExperimentSpec::validate() const
{
    if (placements < 1 || fading < 1)
        throw std::invalid_argument("placements and fading counts must be >= 1");
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (schemes.empty())
        throw std::invalid_argument("scheme list is empty");
    if (threads < 0)
        throw std::invalid_argument("threads must be >= 0");
    for (double v : values)
        (void)apply_sweep(scenario.params, sweep, v);
    solver.validate();
}

std::uint64_t placement_seed(std::uint64_t base, int placement)
{
    return mix_seed(base, static_cast<std::uint64_t>(placement));
}

std::uint64_t fading_seed(std::uint64_t base, int placement, int fading, int fading_count)
{
    const auto k = static_cast<std::uint64_t>(placement) * static_cast<std::uint64_t>(fading_count) +
                   static_cast<std::uint64_t>(fading);
    return mix_seed(base ^ 0x66616465ULL, k);
}

std::vector<TrialRecord> run_trial(const ScenarioConfig &cfg, const std::vector<SchemeTag> &schemes,
                                   const SolverConfig &solver, std::uint64_t pseed, std::uint64_t fseed,
                                   double sweep_value, int placement, int fading, bool record_timing)
{
    const auto geometry = build_geometry(cfg.resolved_layout(), pseed, cfg.params.num_wds, cfg.cluster_radius,
                                         cfg.hap_cluster_dist);
    Rng rng(fseed, 0x666164);
    const auto draw = sample_fading(geometry, cfg.params, rng);
    std::vector<TrialRecord> out;
    for (auto tag : schemes)
    {
        TrialRecord r;
        r.sweep_value = sweep_value;
        r.placement = placement;
        r.fading = fading;
        r.scheme = tag;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            const auto res = compare_schemes(geometry, draw, cfg.params, solver, {tag}).front();
            r.status = res.status;
            r.maxmin = res.sbar;
            r.sum_rate = res.sum_rate;
            r.rates = res.rates;
        }
        catch (const std::exception &)
        {
            r.status = SolveStatus::MaxIter;
        }
        if (record_timing)
            r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("CWPCN_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(v);
    }
    return 1;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord> &records, const std::vector<double> &values,
                                    const std::vector<SchemeTag> &schemes)
{
    std::vector<AggregateRow> out;
    for (double v : values)
        for (auto s : schemes)
        {
            AggregateRow row;
            row.sweep_value = v;
            row.scheme = s;
            std::vector<double> mm, sum;
            for (const auto &r : records)
            {
                if (r.sweep_value != v || r.scheme != s)
                    continue;
                if (r.status == SolveStatus::Optimal)
                {
                    mm.push_back(r.maxmin);
                    sum.push_back(r.sum_rate);
                }
                else
                    ++row.failed;
            }
            row.count = static_cast<int>(mm.size());
            mean_stderr(mm, row.mean_maxmin, row.stderr_maxmin);
            mean_stderr(sum, row.mean_sum, row.stderr_sum);
            out.push_back(row);
        }
    return out;
}

void prepare_output_dir(const std::string &dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir);
    const auto probe = (fs::path(dir) / ".write_probe").string();
    {
        std::ofstream f(probe);
        if (!f || !(f << "ok"))
            throw IoError("output directory is not writable: " + dir);
    }
    fs::remove(probe, ec);
}

void write_raw_csv(const std::string &path, const std::vector<TrialRecord> &records)
{
    auto f = open_out(path);
    f << "sweep_value,placement,fading,scheme,maxmin_bps_hz,sum_bps_hz,status,wall_ms\n";
    for (const auto &r : records)
        f << fmt(r.sweep_value) << ',' << r.placement << ',' << r.fading << ',' << to_string(r.scheme) << ','
          << fmt(r.maxmin) << ',' << fmt(r.sum_rate) << ',' << to_string(r.status) << ',' << fmt(r.wall_ms)
          << '\n';
    close_out(f, path);
}

void write_rates_csv(const std::string &path, const std::vector<TrialRecord> &records)
{
    auto f = open_out(path);
    f << "sweep_value,placement,fading,scheme,wd,rate_bps_hz\n";
    for (const auto &r : records)
        for (std::size_t i = 0; i < r.rates.size(); ++i)
            f << fmt(r.sweep_value) << ',' << r.placement << ',' << r.fading << ',' << to_string(r.scheme) << ','
              << i << ',' << fmt(r.rates[i]) << '\n';
    close_out(f, path);
}

void write_aggregate_csv(const std::string &path, const std::vector<AggregateRow> &rows)
{
    auto f = open_out(path);
    f << "sweep_value,scheme,count,failed,mean_maxmin_bps_hz,stderr_maxmin_bps_hz,mean_sum_bps_hz,"
         "stderr_sum_bps_hz\n";
    for (const auto &r : rows)
        f << fmt(r.sweep_value) << ',' << to_string(r.scheme) << ',' << r.count << ',' << r.failed << ','
          << fmt(r.mean_maxmin) << ',' << fmt(r.stderr_maxmin) << ',' << fmt(r.mean_sum) << ','
          << fmt(r.stderr_sum) << '\n';
    close_out(f, path);
}

std::vector<TrialRecord> read_raw_csv(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot read " + path);
    std::string line;
    std::getline(f, line);
    std::vector<TrialRecord> out;
    while (std::getline(f, line))
    {
        if (line.empty())
            continue;
        const auto c = split(line, ',');
        if (c.size() != 8)
            throw IoError("malformed row in " + path);
        TrialRecord r;
        r.sweep_value = std::stod(c[0]);
        r.placement = std::stoi(c[1]);
        r.fading = std::stoi(c[2]);
        r.scheme = scheme_from_string(c[3]);
        r.maxmin = std::stod(c[4]);
        r.sum_rate = std::stod(c[5]);
        r.status = status_from_string(c[6]);
        r.wall_ms = std::stod(c[7]);
        out.push_back(r);
    }
    return out;
}

std::vector<AggregateRow> read_aggregate_csv(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot read " + path);
    std::string line;
    std::getline(f, line);
    std::vector<AggregateRow> out;
    while (std::getline(f, line))
    {
        if (line.empty())
            continue;
        const auto c = split(line, ',');
        if (c.size() != 8)
            throw IoError("malformed row in " + path);
        AggregateRow r;
        r.sweep_value = std::stod(c[0]);
        r.scheme = scheme_from_string(c[1]);
        r.count = std::stoi(c[2]);
        r.failed = std::stoi(c[3]);
        r.mean_maxmin = std::stod(c[4]);
        r.stderr_maxmin = std::stod(c[5]);
        r.mean_sum = std::stod(c[6]);
        r.stderr_sum = std::stod(c[7]);
        out.push_back(r);
    }
    return out;
}

nlohmann::json to_json(const ExperimentSpec &spec)
{
    nlohmann::json schemes = nlohmann::json::array();
    for (auto s : spec.schemes)
        schemes.push_back(to_string(s));
    const auto &sc = spec.solver;
    return {{"scenario", to_json(spec.scenario)},
            {"schemes", schemes},
            {"sweep", to_string(spec.sweep)},
            {"values", spec.values},
            {"placements", spec.placements},
            {"fading", spec.fading},
            {"seed", spec.seed},
            {"record_timing", spec.record_timing},
            {"solver",
             {{"initial_t", sc.initial_t},
              {"growth", sc.growth},
              {"newton_tol", sc.newton_tol},
              {"gap_rel", sc.gap_rel},
              {"gap_abs", sc.gap_abs},
              {"max_outer", sc.max_outer},
              {"max_inner", sc.max_inner},
              {"tau_floor", sc.tau_floor},
              {"psd_mode", sc.psd_mode == PsdMode::ReducedSpan ? "reduced" : "full"},
              {"kernels", std::string(kernels::isa_name((sc.kernels ? *sc.kernels : kernels::active()).isa))}}}};
}

SweepResult run_sweep(const ExperimentSpec &spec, const Progress &progress)
{
    spec.validate();
    if (!spec.out_dir.empty())
        prepare_output_dir(spec.out_dir);

    struct Job
    {
        std::size_t value;
        int placement;
        int fading;
    };
    std::vector<Job> jobs;
    for (std::size_t v = 0; v < spec.values.size(); ++v)
        for (int p = 0; p < spec.placements; ++p)
            for (int f = 0; f < spec.fading; ++f)
                jobs.push_back({v, p, f});

    std::vector<ScenarioConfig> resolved;
    for (double v : spec.values)
    {
        ScenarioConfig c = spec.scenario;
        c.params = apply_sweep(spec.scenario.params, spec.sweep, v);
        resolved.push_back(c);
    }

    std::vector<std::vector<TrialRecord>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            const Job &j = jobs[i];
            slots[i] = run_trial(resolved[j.value], spec.schemes, spec.solver, placement_seed(spec.seed, j.placement),
                                 fading_seed(spec.seed, j.placement, j.fading, spec.fading), spec.values[j.value],
                                 j.placement, j.fading, spec.record_timing);
            const std::size_t d = ++done;
            if (progress)
            {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, jobs.size());
            }
        }
    };
    const int threads = std::min<int>(resolve_threads(spec.threads), static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }

    SweepResult res;
    for (auto &s : slots)
        for (auto &r : s)
            res.records.push_back(std::move(r));
    res.aggregates = aggregate(res.records, spec.values, spec.schemes);

    if (!spec.out_dir.empty())
    {
        namespace fs = std::filesystem;
        const fs::path dir(spec.out_dir);
        write_raw_csv((dir / "raw.csv").string(), res.records);
        write_rates_csv((dir / "rates.csv").string(), res.records);
        write_aggregate_csv((dir / "aggregate.csv").string(), res.aggregates);
        nlohmann::json run = to_json(spec);
        run["threads"] = threads;
        auto f = open_out((dir / "run.json").string());
        f << run.dump(2) << '\n';
        close_out(f, (dir / "run.json").string());
    }
    return res;
}

} // namespace cwpcn
