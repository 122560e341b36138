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

#ifndef HYNOMA_ORACLE_VERIFY_HPP
#define HYNOMA_ORACLE_VERIFY_HPP

#include "hynoma/channel_models.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hynoma
{

// Brute-force references. Nothing here calls into siso_hybrid or convex_kernel: the rate
// expressions are written out again so that agreement between the two is evidence.

struct GridAxis
{
    double lower = 0.0;
    double upper = 1.0;
    double step = 0.1;

    std::size_t points() const;
    double value(std::size_t index) const { return lower + step * static_cast<double>(index); }
};

struct GridSpec
{
    std::vector<GridAxis> axes;

    static constexpr std::size_t max_dimension = 4;
    static constexpr double max_points = 1e8;

    /// Throws std::invalid_argument on an empty or oversized grid, a bad step or non-finite bounds.
    void validate() const;
    std::size_t total_points() const;
    double step_sum() const;

    static GridSpec cube(std::size_t dimension, double lower, double upper, std::size_t points_per_axis);
};

struct GridOptimum
{
    std::vector<double> powers; // per-slot powers of the searched user
    double energy = 0.0;
    std::size_t feasible_points = 0; // grid points evaluated
};

/// Achievable rate of user m in slot i under the min-over-decoders definition (0-based indices,
/// rows of `powers` are users, columns slots).
double oracle_slot_rate(const std::vector<double> &gains, const Eigen::MatrixXd &powers, std::size_t m,
                        std::size_t i);

/// Exhaustive search for user m's cheapest per-slot powers given the rows of earlier users in
/// `prior` (rows >= m are ignored). One grid axis per shared slot 0..m-1; the own-slot power is
/// set to the least value meeting the rate target, which is exact because user m is alone there.
/// Returned powers cover slots 0..m. Throws std::runtime_error when nothing finite is found.
GridOptimum grid_search_siso(const SisoScenario &scenario, std::size_t m, const Eigen::MatrixXd &prior,
                             const GridSpec &grid);

/// grid_search_siso on [0, 2 E_OMA]^m, followed by `passes` rounds on a window of +-4 steps
/// around the incumbent.
GridOptimum grid_search_siso_refined(const SisoScenario &scenario, std::size_t m, const Eigen::MatrixXd &prior,
                                     std::size_t points_per_axis = 120, int passes = 2);

struct ParetoVerdict
{
    bool dominated = false;
    double best_e1 = 0.0; // energies of the dominating schedule when one exists
    double best_e2 = 0.0;
    double tolerance = 0.0;
};

/// Two-user scan over (P11, P21, P22). A grid schedule dominates the candidate when it is no worse
/// for either user (up to the grid tolerance, the sum of the steps) and better than the candidate
/// by more than that tolerance for at least one of them.
ParetoVerdict pareto_scan_two_user(const SisoScenario &scenario, const Eigen::MatrixXd &candidate,
                                   const GridSpec &grid);

struct SpectralEstimate
{
    double lower = 0.0; // Collatz-Wielandt bounds on rho(tau D^-1 C_off)
    double upper = 0.0;
    int iterations = 0;
    bool feasible = false;
};

/// Power iteration on I + tau D^-1 C_off. Feasible iff the spectral radius is below one.
SpectralEstimate spectral_estimate(const Eigen::MatrixXd &c, double tau, double tolerance = 1e-10);
bool spectral_feasibility(const Eigen::MatrixXd &c, double tau);

} // namespace hynoma

#endif
