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

#ifndef HYNOMA_MISO_HYBRID_HPP
#define HYNOMA_MISO_HYBRID_HPP

#include "hynoma/convex_kernel.hpp"
#include "hynoma/miso_nearfield.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hynoma
{

struct MisoAllocation
{
    Eigen::VectorXd p; // first-phase powers on the borrowed G1 beams
    Eigen::VectorXd e; // second-phase SDMA powers
    double energy = 0.0; // sum_k (M p_k + K e_k), slot duration 1
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> sca_trace;
    double max_kkt_residual = 0.0; // worst barrier KKT residual over SCA iterations
    std::string diagnostic;

    bool feasible() const { return status != SolveStatus::infeasible; }
};

/// sum_k (M p_k + K e_k)
double miso_energy(const Eigen::VectorXd &p, const Eigen::VectorXd &e, std::size_t m_users);

/// OMA benchmark: p = 0, e from exact SINR-target power control on the second-phase gains.
MisoAllocation solve_miso_oma(const EffectiveGains &gains, double target_rate);

/// Largest OMA rate the second phase can support, log(1 + tau*) with tau* the SINR target at which
/// the spectral radius of tau D^-1 C_off reaches one. Located by bisection on the solver's
/// feasibility verdict; +infinity when c is diagonal.
double feasibility_ceiling(const EffectiveGains &gains);
double feasibility_ceiling(const Eigen::MatrixXd &c);

struct ScaOptions
{
    int max_iterations = 50;
    double relative_tolerance = 1e-6;
    double start_perturbation = 1e-6;
    int max_doublings = 60;
    BarrierOptions barrier;
};

/// Smallest slack of the two first-phase constraint families at (p, e), in nats:
///   (M/K) R_1 + R_2 - R   for both the G1-decoding and the direct G2 rate.
double hybrid_constraint_slack(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                               const Eigen::VectorXd &p, const Eigen::VectorXd &e);

/// Hybrid NOMA power allocation by successive convex approximation. Each iteration replaces the
/// interference log terms by their tangent upper bounds at the previous iterate and solves the
/// resulting convex problem with the barrier method, so every iterate is feasible for the
/// original constraints and the objective never increases.
MisoAllocation solve_miso_hybrid_sca(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                                     const ScaOptions &options = {});

/// The convex subproblem solved at one SCA step, linearized at (p0, e0). Variables are (p, e).
ConcaveConstraintSpec sca_subproblem(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                                     const Eigen::VectorXd &p0, const Eigen::VectorXd &e0);

} // namespace hynoma

#endif
