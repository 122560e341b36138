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

#include "hynoma/siso_hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hynoma
{

namespace
{

Eigen::MatrixXd zero_schedule(std::size_t n)
{
    return Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
}

void check_indices(std::span<const double> gains, const Eigen::MatrixXd &powers, std::size_t m, std::size_t i,
                   std::size_t k)
{
    const auto n = gains.size();
    if (powers.rows() != Eigen::Index(n) || powers.cols() != Eigen::Index(n))
        throw std::domain_error("power matrix must be M x M with M = number of gains");
    if (m >= n || !(i <= k && k <= m))
        throw std::domain_error("rate index violation: need slot <= decoder <= user < M (got user " +
                                std::to_string(m) + ", slot " + std::to_string(i) + ", decoder " +
                                std::to_string(k) + ")");
}

// Power already present in slot i before user m's signal is superposed.
double slot_interference(const Eigen::MatrixXd &powers, std::size_t m, std::size_t i)
{
    double s = 0.0;
    for (std::size_t j = i; j < m; ++j)
        s += powers(Eigen::Index(j), Eigen::Index(i));
    return s;
}

} // namespace

AllocationSchedule::AllocationSchedule(SisoScenario scenario, Eigen::MatrixXd powers)
    : scenario_(std::move(scenario)), powers_(std::move(powers))
{
    const auto n = Eigen::Index(scenario_.n_users());
    if (powers_.rows() != n || powers_.cols() != n)
        throw std::invalid_argument("schedule must be M x M");
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double p = powers_(m, i);
            if (!std::isfinite(p) || (i > m && p != 0.0))
                throw std::invalid_argument("schedule must be finite and lower-triangular");
        }

    energy_.resize(scenario_.n_users());
    for (Eigen::Index m = 0; m < n; ++m)
        energy_[std::size_t(m)] = scenario_.slot_duration * powers_.row(m).sum();
}

double AllocationSchedule::total_energy() const
{
    return std::accumulate(energy_.begin(), energy_.end(), 0.0);
}

double AllocationSchedule::accumulated_interference(std::size_t m, std::size_t i) const
{
    if (m >= n_users() || i > m)
        throw std::domain_error("accumulated interference needs slot <= user < M");
    return slot_interference(powers_, m + 1, i);
}

double decode_rate(std::span<const double> gains, const Eigen::MatrixXd &powers, std::size_t m, std::size_t i,
                   std::size_t k)
{
    check_indices(gains, powers, m, i, k);
    const double gk = gains[k];
    const double p = powers(Eigen::Index(m), Eigen::Index(i));
    return std::log1p(gk * p / (gk * slot_interference(powers, m, i) + 1.0));
}

double effective_rate(std::span<const double> gains, const Eigen::MatrixXd &powers, std::size_t m, std::size_t i)
{
    check_indices(gains, powers, m, i, i);
    double r = decode_rate(gains, powers, m, i, i);
    for (std::size_t k = i + 1; k <= m; ++k)
        r = std::min(r, decode_rate(gains, powers, m, i, k));
    return r;
}

RateBreakdown rate_breakdown(const AllocationSchedule &schedule)
{
    const auto &gains = schedule.scenario().gains;
    RateBreakdown out;
    out.per_slot_rates.resize(gains.size());
    out.totals.resize(gains.size(), 0.0);
    for (std::size_t m = 0; m < gains.size(); ++m)
    {
        for (std::size_t i = 0; i <= m; ++i)
            out.per_slot_rates[m].push_back(effective_rate(gains, schedule.powers(), m, i));
        out.totals[m] = std::accumulate(out.per_slot_rates[m].begin(), out.per_slot_rates[m].end(), 0.0);
    }
    return out;
}

Eigen::MatrixXd effective_min_gains(std::span<const double> gains)
{
    const auto n = gains.size();
    Eigen::MatrixXd values = zero_schedule(n);
    for (std::size_t m = 0; m < n; ++m)
    {
        double running = gains[m];
        for (std::size_t i = m + 1; i-- > 0;)
        {
            running = std::min(running, gains[i]);
            values(Eigen::Index(m), Eigen::Index(i)) = running;
        }
    }
    return values;
}

AllocationSchedule oma_allocation(const SisoScenario &scenario)
{
    scenario.validate();
    const auto n = scenario.n_users();
    Eigen::MatrixXd powers = zero_schedule(n);
    const double snr_needed = std::expm1(scenario.target_rate);
    for (std::size_t m = 0; m < n; ++m)
        powers(Eigen::Index(m), Eigen::Index(m)) = snr_needed / scenario.gains[m];
    return {scenario, std::move(powers)};
}

AllocationSchedule hybrid_closed_form(const SisoScenario &scenario)
{
    scenario.validate();
    if (!scenario.ordered || !is_strictly_decreasing(scenario.gains))
        throw std::invalid_argument("closed form requires strictly decreasing gains; use successive_allocation");

    const auto n = scenario.n_users();
    Eigen::MatrixXd powers = zero_schedule(n);
    if (scenario.target_rate == 0.0)
        return {scenario, std::move(powers)};

    std::vector<double> level(n);
    for (std::size_t m = 0; m < n; ++m)
    {
        // Under ordered gains every slot i <= m has effective gain gains[m]; the water level is
        // lambda = (e^R * prod_i (I_i + 1/gamma_m))^(1/(m+1)).
        const double gamma = scenario.gains[m];
        double log_sum = 0.0;
        for (std::size_t i = 0; i <= m; ++i)
        {
            level[i] = slot_interference(powers, m, i) + 1.0 / gamma;
            log_sum += std::log(level[i]);
        }
        const double water = std::exp((scenario.target_rate + log_sum) / static_cast<double>(m + 1));
        for (std::size_t i = 0; i <= m; ++i)
            powers(Eigen::Index(m), Eigen::Index(i)) = water - level[i];
    }
    return {scenario, std::move(powers)};
}

std::vector<double> waterfill_user(std::span<const double> interference, std::span<const double> gains,
                                   double target_rate)
{
    if (interference.size() != gains.size() || gains.empty())
        throw std::domain_error("interference and gain lists must be non-empty and of equal length");
    if (!std::isfinite(target_rate) || target_rate < 0.0)
        throw std::domain_error("target rate must be finite and non-negative");

    const auto n = gains.size();
    std::vector<double> level(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!std::isfinite(gains[i]) || !(gains[i] > 0.0))
            throw std::domain_error("effective gains must be positive and finite");
        if (!std::isfinite(interference[i]) || interference[i] < 0.0)
            throw std::domain_error("slot interference must be finite and non-negative");
        level[i] = interference[i] + 1.0 / gains[i];
    }

    std::vector<double> powers(n, 0.0);
    if (target_rate == 0.0)
        return powers;

    // Cheapest slots first; stable so equal levels keep index order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] < level[b]; });

    double log_sum = 0.0;
    double water = 0.0;
    for (std::size_t active = 1; active <= n; ++active)
    {
        log_sum += std::log(level[order[active - 1]]);
        water = std::exp((target_rate + log_sum) / static_cast<double>(active));
        if (active == n || water <= level[order[active]])
        {
            for (std::size_t r = 0; r < active; ++r)
                powers[order[r]] = std::max(0.0, water - level[order[r]]);
            break;
        }
    }
    return powers;
}

AllocationSchedule successive_allocation(const SisoScenario &scenario)
{
    scenario.validate();
    const auto n = scenario.n_users();
    Eigen::MatrixXd powers = zero_schedule(n);
    if (scenario.target_rate == 0.0)
        return {scenario, std::move(powers)};

    const Eigen::MatrixXd min_gain = effective_min_gains(scenario.gains);
    std::vector<double> interference, gains;
    for (std::size_t m = 0; m < n; ++m)
    {
        interference.assign(m + 1, 0.0);
        gains.assign(m + 1, 0.0);
        for (std::size_t i = 0; i <= m; ++i)
        {
            interference[i] = slot_interference(powers, m, i);
            gains[i] = min_gain(Eigen::Index(m), Eigen::Index(i));
        }
        const auto row = waterfill_user(interference, gains, scenario.target_rate);
        for (std::size_t i = 0; i <= m; ++i)
            powers(Eigen::Index(m), Eigen::Index(i)) = row[i];
    }
    return {scenario, std::move(powers)};
}

std::pair<double, double> uplink_two_user(double gain1, double gain2, double target_rate)
{
    if (!(gain2 > 0.0) || !(gain1 > gain2) || !std::isfinite(gain1))
        throw std::invalid_argument("uplink contrast requires gain1 > gain2 > 0");
    if (!std::isfinite(target_rate) || target_rate < 0.0)
        throw std::invalid_argument("target rate must be finite and non-negative");

    // User 1 occupies slot 1 alone at exactly the target rate.
    const double p11 = std::expm1(target_rate) / gain1;
    const double slot1_level = gain1 * p11 + 1.0;

    // Two-slot water level for levels slot1_level/gain2 and 1/gain2.
    const double water = std::sqrt(std::exp(target_rate) * slot1_level) / gain2;
    return {water - slot1_level / gain2, water - 1.0 / gain2};
}

EnergyReport energy_report(const AllocationSchedule &schedule)
{
    return {schedule.per_user_energy(), schedule.total_energy()};
}

} // namespace hynoma
