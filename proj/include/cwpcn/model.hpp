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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace cwpcn {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 3.0e8;

/// x dBm -> watts (x dBm = 10^(x/10) mW).
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Which channel gain enters the phase II/III interference constraints.
///
/// ToReceiver uses the WD->PR gains h_iR / h_0R, the physical interference
/// seen by the primary receiver. PaperLiteral uses the PT->WD gains h_iD /
/// h_0D exactly as the constraint equations are printed in the source model.
enum class ItcConvention { ToReceiver, PaperLiteral };

/// Per-entry variance of the HAP antenna vectors a_i and b. PerEntry gives
/// every antenna entry the link's path-loss gain (E[|a_i|^2] = M delta^2);
/// TotalPower splits it across the antennas (E[|a_i|^2] = delta^2).
enum class AntennaVariance { PerEntry, TotalPower };

struct SystemParams
{
    double noise_power = 1e-12;        // N0 [W]
    double harvest_efficiency = 0.5;   // eta
    double primary_tx_power = 0.1;     // P_p [W]
    double hap_tx_power = 3.0;         // P_H (== P_max of the sweeps) [W]
    double itc_threshold = 1e-9;       // I_max [W], -60 dBm
    double ce_duration = 0.0;          // tau_0, fraction of a unit block
    int antennas = 5;                  // M
    int num_wds = 15;                  // N
    std::vector<double> circuit_energy;   // e_i [J] per physical WD; empty means all zero
    std::vector<double> battery_init;     // E_0,i [J] per physical WD; empty means all zero
    double battery_cap = std::numeric_limits<double>::infinity(); // E_max [J]
    double carrier_freq = 915e6;       // f_c [Hz]
    double antenna_gain = 4.0;         // G_A
    double pathloss_exp = 3.0;         // alpha
    ItcConvention itc_convention = ItcConvention::ToReceiver;
    AntennaVariance antenna_variance = AntennaVariance::PerEntry;

    double circuit(int wd) const;
    double battery0(int wd) const;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

/// Mean channel gain G_A (c / (4 pi d f_c))^alpha. Throws std::domain_error
/// for non-positive distance, frequency or antenna gain.
double pathloss_gain(double distance, double carrier_freq, double antenna_gain, double pathloss_exp);
double pathloss_gain(double distance, const SystemParams &params);

struct Vec2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2 &a, const Vec2 &b);

enum class ScenarioCase { Case1, Case2, Case3, Custom };

std::string to_string(ScenarioCase c);
ScenarioCase scenario_from_string(const std::string &s);

/// Fixed positions of the primary pair and the HAP.
struct PrimaryLayout
{
    Vec2 pt;
    Vec2 pr;
    Vec2 hap;
};

/// PT at the origin, PR at (200, 0), HAP on the PT-PR axis at 202 m (Case 1),
/// 100 m (Case 2) or 30 m (Case 3) from the PT. Custom has no canned layout.
PrimaryLayout layout_for(ScenarioCase c);

struct NetworkGeometry
{
    Vec2 hap;
    Vec2 pt;
    Vec2 pr;
    std::vector<Vec2> wd;
    Vec2 cluster_center;
    int ch_index = 0;

    int num_wds() const { return static_cast<int>(wd.size()); }
    void validate() const;
};

enum class ChRule { ClosestToCenter, ClosestToHap };

/// Counter-based seeding: the stream tag separates placement and fading
/// draws, so any (seed, stream) pair maps to an independent generator.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng
{
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double uniform();
    double normal();
    /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
    cplx complex_normal(double variance);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// WDs i.i.d. uniform on the disk of the given radius; the cluster center sits
/// hap_cluster_dist from the HAP, perpendicular to the PT-PR axis. The CH is
/// the WD closest to the cluster center.
NetworkGeometry build_geometry(const PrimaryLayout &layout, std::uint64_t seed, int num_wds, double radius,
                               double hap_cluster_dist);
NetworkGeometry build_geometry(ScenarioCase c, std::uint64_t seed, int num_wds, double radius,
                               double hap_cluster_dist);

/// argmin distance; ties go to the lowest index.
int select_cluster_head(const NetworkGeometry &geometry, ChRule rule);

/// One fading block indexed by physical WD. WD-WD coefficients are drawn for
/// every pair so any cluster head can be chosen on the same realization.
struct FadingDraw
{
    std::vector<cvec> a;   // HAP <-> WD_i, length M each
    cmat c;                // WD_i <-> WD_j, symmetric, zero diagonal
    cvec b;                // HAP -> PR
    cplx l_th;             // PT -> HAP
    std::vector<cplx> l_r; // WD_i -> PR
    std::vector<cplx> l_d; // PT -> WD_i
};

FadingDraw sample_fading(const NetworkGeometry &geometry, const SystemParams &params, Rng &rng);

/// Channel state seen by one cluster configuration. Labels are relabeled so
/// the CH is label 0 and CMs are labels 1..N-1; wd_index maps a label back to
/// the physical WD. Vectors over CMs (c, g) keep the full length N with a zero
/// at the CH slot.
struct ChannelRealization
{
    int antennas = 0;
    int num_wds = 0;
    std::vector<int> wd_index;

    std::vector<cvec> a;
    std::vector<cplx> c;
    cvec b;
    cplx l_th{0.0, 0.0};
    std::vector<cplx> l_r;
    std::vector<cplx> l_d;

    std::vector<double> h;
    std::vector<double> g;
    std::vector<double> h_r;
    std::vector<double> h_d;
    double h_th = 0.0;
    cmat H_HR;

    /// Recomputes every derived gain from the coefficients.
    void refresh_gains();

    cmat A(int label) const { return a[label] * a[label].adjoint(); }

    /// Gain used by the phase II/III interference constraint of a WD.
    double itc_gain(int label, ItcConvention convention) const;
};

ChannelRealization realize(const FadingDraw &draw, int ch_index);

ChannelRealization sample_channels(const NetworkGeometry &geometry, const SystemParams &params, Rng &rng);

} // namespace cwpcn
