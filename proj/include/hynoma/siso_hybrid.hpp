// SPDX-License-Identifier: Apache-2.0
//
// hynoma - downlink hybrid NOMA power allocation library and simulator
// Copyright (C) 2026 The hynoma Authors
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

#ifndef HYNOMA_SISO_HYBRID_HPP
#define HYNOMA_SISO_HYBRID_HPP

#include "hynoma/channel_models.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace hynoma
{

// Indices in this module are 0-based: user m is served alone in slot m under TDMA and may
// also use every earlier slot i < m under hybrid NOMA. powers(m, i) is user m's power in slot i.

/// Lower-triangular power schedule together with the scenario it was computed for.
class AllocationSchedule
{
  public:
    AllocationSchedule(SisoScenario scenario, Eigen::MatrixXd powers);

    const SisoScenario &scenario() const { return scenario_; }
    const Eigen::MatrixXd &powers() const { return powers_; }
    double power(std::size_t m, std::size_t i) const { return powers_(Eigen::Index(m), Eigen::Index(i)); }
    std::size_t n_users() const { return scenario_.n_users(); }

    /// E_m = T * sum_i P_{m,i}
    const std::vector<double> &per_user_energy() const { return energy_; }
    double total_energy() const;

    /// Sum of the powers of users i..m in slot i (the accumulated interference seen in slot i).
    double accumulated_interference(std::size_t m, std::size_t i) const;

  private:
    SisoScenario scenario_;
    Eigen::MatrixXd powers_;
    std::vector<double> energy_;
};

struct RateBreakdown
{
    std::vector<std::vector<double>> per_slot_rates; // per_slot_rates[m][i], i <= m
    std::vector<double> totals;
};

struct EnergyReport
{
    std::vector<double> per_user;
    double total = 0.0;
};

/// Rate at which decoder k recovers user m's signal in slot i (requires i <= k <= m).
double decode_rate(std::span<const double> gains, const Eigen::MatrixXd &powers, std::size_t m, std::size_t i,
                   std::size_t k);

/// User m's achievable rate in slot i: the minimum of decode_rate over decoders k = i..m.
double effective_rate(std::span<const double> gains, const Eigen::MatrixXd &powers, std::size_t m, std::size_t i);

RateBreakdown rate_breakdown(const AllocationSchedule &schedule);

/// values(m, i) = min(gains[i..m]) for i <= m, zero above the diagonal.
Eigen::MatrixXd effective_min_gains(std::span<const double> gains);

AllocationSchedule oma_allocation(const SisoScenario &scenario);

/// Closed-form optimum for strictly decreasing gains, computed user by user.
/// Throws std::invalid_argument for unordered input (use successive_allocation instead).
AllocationSchedule hybrid_closed_form(const SisoScenario &scenario);

/// Minimises sum_i P_i subject to sum_i log(1 + g_i P_i / (g_i I_i + 1)) >= rate, P >= 0.
/// `interference[i]` is the power already placed in slot i by earlier users, `gains[i]` the
/// effective (min) gain of the slot. Water-filling with an exact sorted active set.
std::vector<double> waterfill_user(std::span<const double> interference, std::span<const double> gains,
                                   double target_rate);

/// Successive resource allocation in the given user order, valid for any gain order.
AllocationSchedule successive_allocation(const SisoScenario &scenario);

/// Two-user uplink contrast: returns (P_{2,1}, P_{2,2}) from the KKT point of the uplink problem.
/// Requires gain1 > gain2 > 0; user 1 is assumed to meet its rate exactly in slot 1.
std::pair<double, double> uplink_two_user(double gain1, double gain2, double target_rate);

EnergyReport energy_report(const AllocationSchedule &schedule);

} // namespace hynoma

#endif
