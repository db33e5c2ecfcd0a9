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

#include "cwpcn/barrier.hpp"
#include "cwpcn/rates.hpp"
#include "cwpcn/transform.hpp"

#include <optional>
#include <vector>

// Common convex model behind the cooperative, independent and hybrid
// schemes. A scheme is a list of transmission slots after one shared
// energy-transfer phase. Each slot has a duration tau_s, a scaled energy
// x_s = tau_s P_s / eta, draws from the battery of one WD (its pool) and
// carries one message. Labels follow ChannelRealization (CH = 0).

namespace cwpcn {

enum class SlotRole
{
    Intra,  // CM -> CH (phase II), overheard by the HAP
    Relay,  // CH forwards a CM's message (phase III)
    Direct, // a WD's own message straight to the HAP
};

struct Slot
{
    SlotRole role = SlotRole::Direct;
    int message = 0; // label whose data the slot carries
    int pool = 0;    // label that pays the energy and causes the interference
};

struct SchemeLayout
{
    // direct[i]: label i sends its own data to the HAP; otherwise the CH
    // (label 0) relays it. direct[0] is always true.
    std::vector<bool> direct;

    static SchemeLayout cooperative(int num_wds);
    static SchemeLayout independent(int num_wds);

    int num_wds() const { return static_cast<int>(direct.size()); }
    bool has_relaying() const;
    std::vector<Slot> slots() const;
};

struct SchemeAllocation
{
    double tau1 = 0.0;
    cmat Q;
    std::vector<Slot> slots;
    std::vector<double> tau;
    std::vector<double> power;

    double total_time() const;
};

struct SchemeEvaluation
{
    std::vector<double> rates; // per label
    double min_rate = 0.0;
    double sum_rate = 0.0;
    ConstraintReport constraints;
};

/// Rates and feasibility of a scheme allocation in the original variables.
SchemeEvaluation evaluate_scheme(const SchemeAllocation &alloc, const ChannelRealization &ch,
                                 const SystemParams &params, double tol = 1e-9);

enum class PsdMode { ReducedSpan, FullMatrix };

class SchemeModel
{
public:
    enum class Trivial { None, ZeroOptimum, Infeasible };

    struct Point
    {
        double tau1 = 0.0;
        cmat X; // k x k, W = U X U^H
        std::vector<double> tau;
        std::vector<double> x;
        double sbar = 0.0;
    };

    SchemeModel(const ChannelRealization &ch, const SystemParams &params, SchemeLayout layout, PsdMode mode,
                double tau_floor);

    Trivial trivial() const { return trivial_; }
    const std::vector<Slot> &slots() const { return slots_; }
    const SchemeLayout &layout() const { return layout_; }
    int psd_dim() const { return k_; }
    const cmat &basis() const { return U_; }

    barrier::Problem max_min_problem() const;
    barrier::Problem min_time_problem(double target) const;

    /// Strictly interior starting points; nullopt when none could be built.
    std::optional<std::vector<double>> max_min_start() const;
    std::optional<std::vector<double>> min_time_start(double target) const;

    Point decode(const std::vector<double> &v, bool with_sbar) const;
    Point zero_point() const;

    /// Snaps durations below 10 floor (with their energies) to zero, trims
    /// energies to the pool budgets and sets sbar to the min rate.
    void clean(Point &p) const;

    std::vector<double> rates(const Point &p) const;
    /// Rate-row left-hand sides minus sbar, per label (min over the label's rows).
    std::vector<double> rate_slack(const Point &p) const;
    double upper_bound() const;

    cmat W(const Point &p) const;
    SchemeAllocation allocation(const Point &p) const;
    /// Only meaningful for the cooperative layout.
    TransformedPoint transformed(const Point &p) const;
    int time_variable_count() const;
    double time_budget() const { return 1.0 - params_.ce_duration; }

private:
    struct Term
    {
        int slot;
        double rho;
    };
    struct Row
    {
        int label;
        std::vector<Term> terms;
    };

    void build_rows(barrier::Problem &pr, bool max_min, double target) const;
    std::vector<double> start(bool max_min, double scale) const;
    double pool_budget(int label, const Point &p) const;

    const ChannelRealization &ch_;
    const SystemParams &params_;
    SchemeLayout layout_;
    std::vector<Slot> slots_;
    std::vector<bool> enabled_;
    std::vector<double> gain_;    // interference gain of each slot's pool
    std::vector<Row> rows_;
    Trivial trivial_ = Trivial::None;

    cmat U_;
    int k_ = 0;
    bool has_w_ = false;
    bool project_b_ = false;
    std::vector<std::vector<double>> q_; // quad-form coefficients of U^H a_i
    std::vector<double> qb_;
    double bnorm2_ = 0.0;
    cvec ub_; // b in reduced coordinates

    // variable indices
    int i_tau1_ = -1;
    std::vector<int> i_tau_, i_x_;
    int i_psd_ = -1;
    int n_core_ = 0;
    double floor_ = 1e-9;
};

} // namespace cwpcn
