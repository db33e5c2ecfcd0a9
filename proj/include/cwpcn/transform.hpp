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

#include "cwpcn/rates.hpp"

#include <stdexcept>
#include <vector>

// Change of variables that makes the max-min problem convex: energies
// Psi = tau2 P2 / eta and theta = tau3 P3 / eta replace the transmit powers,
// W = tau1 Q replaces the beamforming matrix, z_i = tr(A_i W) is the scaled
// harvested energy, and every rate becomes a perspective tau log2(1 + rho x / tau).

namespace cwpcn {

struct RateCoefficients
{
    std::vector<double> rho_bar; // eta g_i / (N0 + h_0D P_p), CM -> CH; entry 0 unused
    std::vector<double> rho;     // eta h_i / (N0 + h_TH P_p), WD -> HAP
    double rho0 = 0.0;           // rho[0], CH -> HAP
    std::vector<double> phi;     // eta * interference gain (convention-selected)
};

RateCoefficients rate_coefficients(const ChannelRealization &ch, const SystemParams &params);

struct TransformedPoint
{
    double tau1 = 0.0;
    std::vector<double> tau2;  // entry 0 unused
    std::vector<double> tau3;
    std::vector<double> psi;   // entry 0 unused
    std::vector<double> theta;
    std::vector<double> z;
    cmat W;
    double sbar = 0.0;
    std::vector<double> battery; // auxiliary E_i [J]

    static TransformedPoint zeros(int num_wds, int antennas);
    int num_wds() const { return static_cast<int>(tau3.size()); }
};

class InconsistentPoint : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// tau log2(1 + rho x / tau) with the value 0 at tau = 0. Throws
/// std::domain_error on negative input.
double perspective_rate(double tau, double x, double rho);

/// Maps a P1 allocation into P3 variables. sbar defaults to the allocation's
/// min rate (evaluated unchecked); z and the battery variables are derived.
TransformedPoint to_transformed(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                const SystemParams &params);
TransformedPoint to_transformed(const ResourceAllocation &alloc, const ChannelRealization &ch,
                                const SystemParams &params, double sbar);

inline constexpr double kZeroTimeTolerance = 1e-12;

/// Q = W / tau1, P = eta x / tau. A zero duration with a paired energy above
/// kZeroTimeTolerance (or a nonzero W when tau1 = 0) is an InconsistentPoint.
ResourceAllocation recover_allocation(const TransformedPoint &point, const SystemParams &params);

/// Every P3 constraint in "lhs <= rhs" form, including the epigraph rate rows.
ConstraintReport transformed_residuals(const TransformedPoint &point, const ChannelRealization &ch,
                                       const SystemParams &params, double tol = 1e-9);

/// Left-hand sides of the three families of rate constraints, per label:
/// R_0 for the CH, min(R2_i, V2_i + V3_i) for CMs.
std::vector<double> transformed_rates(const TransformedPoint &point, const RateCoefficients &coef);

nlohmann::json to_json(const TransformedPoint &point);

} // namespace cwpcn
