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

#include <stdexcept>
#include <string>
#include <vector>

// Ground-truth evaluation of a cluster-cooperation allocation in its
// original variables: harvested energy, per-phase rates, joint decoding and
// interference. All per-WD vectors are indexed by label (CH = 0); phase II
// quantities exist for CMs only and their entry 0 is held at zero.

namespace cwpcn {

struct ResourceAllocation
{
    double tau1 = 0.0;
    std::vector<double> tau2; // CM i -> CH, entry 0 unused
    std::vector<double> tau3; // CH -> HAP, message i (0 = CH's own)
    std::vector<double> p2;
    std::vector<double> p3;
    cmat Q;

    static ResourceAllocation zeros(int num_wds, int antennas);
    int num_wds() const { return static_cast<int>(tau3.size()); }
    double total_time() const;
};

/// One constraint in "lhs <= rhs" form. Dimensionless rows (time fractions,
/// rates) are checked with an absolute tolerance; rows in watts or joules
/// with a tolerance relative to the right-hand side plus a 1e-24 floor.
struct Constraint
{
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool physical = false;

    double residual() const { return lhs - rhs; }
    bool satisfied(double tol) const;
};

struct ConstraintReport
{
    std::vector<Constraint> items;
    double tolerance = 1e-9;

    bool feasible() const;
    std::vector<Constraint> violations() const;
    const Constraint *find(const std::string &name) const;
    void add(std::string name, double lhs, double rhs, bool physical);
};

class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class InfeasibleAllocation : public std::runtime_error
{
public:
    explicit InfeasibleAllocation(ConstraintReport report);
    const ConstraintReport &report() const { return report_; }

private:
    ConstraintReport report_;
};

struct InterferencePowers
{
    double phase1 = 0.0;
    std::vector<double> phase2; // CM i, entry 0 unused
    std::vector<double> phase3; // CH while sending message i
};

struct ThroughputReport
{
    std::vector<int> wd_index;
    std::vector<double> rates;     // R_0 for the CH, joint rate R_i for CMs
    double min_rate = 0.0;
    double sum_rate = 0.0;
    std::vector<double> harvested; // H_i [J]
    std::vector<double> battery;   // E_i [J]
    InterferencePowers interference;
    ConstraintReport constraints;
};

/// tau log2(1 + gain p / noise); exactly zero when tau or p is zero.
double link_rate(double tau, double power, double gain, double noise);

/// Smallest eigenvalue of the Hermitian part of Q.
double min_eigenvalue(const cmat &Q);

std::vector<double> harvested_energy(const cmat &Q, double tau1, const ChannelRealization &ch, double eta);

double battery_level(double initial, double harvested, double cap);

double intra_cluster_rate(double tau2, double p2, double g, double h0d, const SystemParams &params);

double hap_overheard_rate(double tau2, double p2, double h, double h_th, const SystemParams &params);

struct ChRates
{
    double r0 = 0.0;
    std::vector<double> v3; // entry 0 unused
};

ChRates ch_rates(const std::vector<double> &tau3, const std::vector<double> &p3, double h0, double h_th,
                 const SystemParams &params);

double joint_cm_rate(double r2, double v2, double v3);

InterferencePowers interference_powers(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                       const SystemParams &params);

ConstraintReport check_feasibility(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                   const SystemParams &params, double tol = 1e-9);

enum class Evaluation { Checked, Unchecked };

/// Throws InfeasibleAllocation when checked and any constraint fails.
ThroughputReport evaluate(const ResourceAllocation &alloc, const ChannelRealization &ch, const SystemParams &params,
                          Evaluation mode = Evaluation::Checked);

nlohmann::json to_json(const ConstraintReport &report);
nlohmann::json to_json(const ThroughputReport &report);

} // namespace cwpcn
