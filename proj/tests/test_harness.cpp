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

#include "test_util.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace cwpcn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string &name)
{
    const auto d = fs::temp_directory_path() / ("cwpcn_test_" + name);
    fs::remove_all(d);
    return d;
}

ExperimentSpec small_spec(int wds)
{
    ExperimentSpec s;
    s.scenario.params.num_wds = wds;
    s.sweep = SweepVar::Pmax;
    s.values = {1.0, 3.0};
    s.placements = 2;
    s.fading = 3;
    s.seed = 7;
    return s;
}

} // namespace

TEST_CASE("sweep variables")
{
    SystemParams p;
    CHECK(apply_sweep(p, SweepVar::Pmax, 2.5).hap_tx_power == 2.5);
    CHECK(apply_sweep(p, SweepVar::Imax, -60.0).itc_threshold == doctest::Approx(1e-9));
    CHECK(apply_sweep(p, SweepVar::N, 20).num_wds == 20);
    CHECK(apply_sweep(p, SweepVar::Pp, 0.1).primary_tx_power == 0.1);
    CHECK_THROWS(apply_sweep(p, SweepVar::N, 2.5));
    CHECK_THROWS(apply_sweep(p, SweepVar::Pmax, -1.0));
    for (auto v : {SweepVar::Pmax, SweepVar::Imax, SweepVar::N, SweepVar::Pp})
    {
        CHECK(sweep_from_string(to_string(v)) == v);
        CHECK_FALSE(default_sweep_values(v).empty());
    }
    CHECK(default_sweep_values(SweepVar::N) == std::vector<double>{15, 20, 25, 30});
    CHECK_THROWS(sweep_from_string("power"));
}

TEST_CASE("seeds are distinct and stable")
{
    std::set<std::uint64_t> seen;
    for (int p = 0; p < 20; ++p)
    {
        seen.insert(placement_seed(1, p));
        for (int f = 0; f < 50; ++f)
            seen.insert(fading_seed(1, p, f, 50));
    }
    CHECK(seen.size() == 20 + 20 * 50);
    CHECK(placement_seed(1, 3) == placement_seed(1, 3));
    CHECK(placement_seed(1, 3) != placement_seed(2, 3));
}

TEST_CASE("spec validation")
{
    auto s = small_spec(3);
    CHECK_NOTHROW(s.validate());
    s.placements = 0;
    CHECK_THROWS(s.validate());
    s = small_spec(3);
    s.values.clear();
    CHECK_THROWS(s.validate());
    s = small_spec(3);
    s.schemes.clear();
    CHECK_THROWS(s.validate());
    s = small_spec(3);
    s.sweep = SweepVar::N;
    s.values = {0};
    CHECK_THROWS(s.validate());
}

TEST_CASE("thread count resolution")
{
    CHECK(resolve_threads(3) == 3);
    ::setenv("CWPCN_THREADS", "4", 1);
    CHECK(resolve_threads(0) == 4);
    ::setenv("CWPCN_THREADS", "x", 1);
    CHECK(resolve_threads(0) == 1);
    ::unsetenv("CWPCN_THREADS");
    CHECK(resolve_threads(0) == 1);
}

TEST_CASE("run_trial yields one record per scheme and is repeatable")
{
    ScenarioConfig cfg;
    cfg.params.num_wds = 4;
    const auto a = run_trial(cfg, all_schemes(), {}, 11, 12, 3.0, 0, 0, false);
    const auto b = run_trial(cfg, all_schemes(), {}, 11, 12, 3.0, 0, 0, false);
    REQUIRE(a.size() == 4);
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        CHECK(a[k].scheme == all_schemes()[k]);
        CHECK(a[k].maxmin == b[k].maxmin);
        CHECK(a[k].rates == b[k].rates);
        CHECK(a[k].wall_ms == 0.0);
        CHECK(a[k].status == SolveStatus::Optimal);
        CHECK(a[k].rates.size() == 4);
    }
    const auto c = run_trial(cfg, {SchemeTag::It}, {}, 11, 13, 3.0, 0, 1, true);
    REQUIRE(c.size() == 1);
    CHECK(c[0].maxmin != a[3].maxmin);
    CHECK(c[0].wall_ms > 0.0);
}

TEST_CASE("one trial aggregates to itself")
{
    auto s = small_spec(3);
    s.values = {2.0};
    s.placements = 1;
    s.fading = 1;
    const auto r = run_sweep(s);
    REQUIRE(r.records.size() == 4);
    REQUIRE(r.aggregates.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
    {
        CHECK(r.aggregates[k].count == 1);
        CHECK(r.aggregates[k].mean_maxmin == r.records[k].maxmin);
        CHECK(r.aggregates[k].mean_sum == r.records[k].sum_rate);
        CHECK(r.aggregates[k].stderr_maxmin == 0.0);
    }
}

TEST_CASE("aggregates excluding failures")
{
    std::vector<TrialRecord> recs(4);
    const double mm[] = {1.0, 2.0, 4.0, 100.0};
    for (int i = 0; i < 4; ++i)
    {
        recs[i].sweep_value = 1.0;
        recs[i].scheme = SchemeTag::It;
        recs[i].maxmin = mm[i];
        recs[i].sum_rate = 2 * mm[i];
        recs[i].status = i == 3 ? SolveStatus::MaxIter : SolveStatus::Optimal;
    }
    const auto a = aggregate(recs, {1.0}, {SchemeTag::It});
    REQUIRE(a.size() == 1);
    CHECK(a[0].count == 3);
    CHECK(a[0].failed == 1);
    CHECK(a[0].mean_maxmin == doctest::Approx(7.0 / 3.0));
    // sd with n - 1: sqrt(((4/3)^2 + (1/3)^2 + (5/3)^2) / 2) = sqrt(7/3)
    CHECK(a[0].stderr_maxmin == doctest::Approx(std::sqrt(7.0 / 3.0) / std::sqrt(3.0)));
    CHECK(a[0].stderr_sum == doctest::Approx(2.0 * std::sqrt(7.0 / 3.0) / std::sqrt(3.0)));
}

TEST_CASE("output files and round trip")
{
    auto s = small_spec(3);
    const auto dir = fresh_dir("files");
    s.out_dir = dir.string();
    const auto r = run_sweep(s);
    CHECK(r.records.size() == 2 * 2 * 3 * 4);
    for (const char *f : {"raw.csv", "rates.csv", "aggregate.csv", "run.json"})
        CHECK(fs::exists(dir / f));

    const auto raw = slurp(dir / "raw.csv");
    CHECK(raw.rfind("sweep_value,placement,fading,scheme,maxmin_bps_hz,sum_bps_hz,status,wall_ms\n", 0) == 0);

    // aggregates recomputed from the file match the written ones exactly
    const auto back = read_raw_csv((dir / "raw.csv").string());
    REQUIRE(back.size() == r.records.size());
    for (std::size_t k = 0; k < back.size(); ++k)
    {
        CHECK(back[k].maxmin == r.records[k].maxmin);
        CHECK(back[k].sum_rate == r.records[k].sum_rate);
        CHECK(back[k].status == r.records[k].status);
    }
    const auto again = aggregate(back, s.values, s.schemes);
    const auto written = read_aggregate_csv((dir / "aggregate.csv").string());
    REQUIRE(again.size() == written.size());
    for (std::size_t k = 0; k < again.size(); ++k)
    {
        CHECK(again[k].mean_maxmin == written[k].mean_maxmin);
        CHECK(again[k].stderr_maxmin == written[k].stderr_maxmin);
        CHECK(again[k].mean_sum == written[k].mean_sum);
        CHECK(again[k].count == written[k].count);
    }

    std::ifstream jf(dir / "run.json");
    nlohmann::json j;
    jf >> j;
    CHECK(j["placements"] == 2);
    CHECK(j["scenario"]["num_wds"] == 3);
    CHECK(j["scenario"]["itc_convention"] == "receiver");
    fs::remove_all(dir);
}

TEST_CASE("serial and threaded runs write identical files")
{
    auto s = small_spec(4);
    const auto d1 = fresh_dir("serial"), d2 = fresh_dir("threads");
    s.out_dir = d1.string();
    s.threads = 1;
    run_sweep(s);
    s.out_dir = d2.string();
    s.threads = 3;
    run_sweep(s);
    for (const char *f : {"raw.csv", "rates.csv", "aggregate.csv"})
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("an unwritable output directory fails before solving")
{
    const auto blocker = fs::temp_directory_path() / "cwpcn_test_blocker";
    {
        std::ofstream f(blocker);
        f << "x";
    }
    auto s = small_spec(3);
    s.out_dir = (blocker / "sub").string();
    std::size_t calls = 0;
    CHECK_THROWS_AS(run_sweep(s, [&](std::size_t, std::size_t) { ++calls; }), IoError);
    CHECK(calls == 0);
    fs::remove(blocker);
}

TEST_CASE("standard error shrinks with more fading draws")
{
    // single-antenna rates are heavy-tailed, so use the default array
    auto s = small_spec(3);
    s.values = {3.0};
    s.schemes = {SchemeTag::It};
    s.placements = 1;
    s.fading = 40;
    const double se40 = run_sweep(s).aggregates[0].stderr_maxmin;
    s.fading = 160;
    const double se160 = run_sweep(s).aggregates[0].stderr_maxmin;
    REQUIRE(se40 > 0.0);
    const double ratio = se160 / se40;
    MESSAGE("stderr ratio " << ratio);
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.75);
}

TEST_CASE("the scenario case selects the primary layout")
{
    ScenarioConfig c1, c3;
    c1.params.num_wds = 3;
    c3.params.num_wds = 3;
    c3.scenario = ScenarioCase::Case3;
    CHECK(c3.resolved_layout().hap.x == layout_for(ScenarioCase::Case3).hap.x);
    const auto a = run_trial(c1, {SchemeTag::CcCenter}, {}, 5, 6, 3.0, 0, 0, false);
    const auto b = run_trial(c3, {SchemeTag::CcCenter}, {}, 5, 6, 3.0, 0, 0, false);
    CHECK(a[0].maxmin > b[0].maxmin);

    ScenarioConfig custom;
    custom.scenario = ScenarioCase::Custom;
    custom.layout = layout_for(ScenarioCase::Case2);
    CHECK(custom.resolved_layout().hap.y == layout_for(ScenarioCase::Case2).hap.y);
}
