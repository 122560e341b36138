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

#ifndef HYNOMA_CONVEX_KERNEL_HPP
#define HYNOMA_CONVEX_KERNEL_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hynoma
{

enum class SolveStatus
{
    optimal,
    infeasible,
    max_iterations
};

const char *to_string(SolveStatus status);

struct SolveReport
{
    SolveStatus status = SolveStatus::infeasible;
    Eigen::VectorXd solution;
    double objective = 0.0;
    int iterations = 0;
    double kkt_residual = 0.0;
    double spectral_radius = 0.0;      // linear power control only
    std::vector<double> outer_objectives; // barrier method only: objective after each centering step
    std::string diagnostic;
};

// SINR-target power control: c(k,k) P_k / (sum_{i != k} c(k,i) P_i + noise_k) >= sinr_target.
struct LinearPowerControlProblem
{
    Eigen::MatrixXd gain_matrix;
    double sinr_target = 1.0;
    Eigen::VectorXd noise; // empty means all ones

    void validate() const;
    Eigen::VectorXd noise_or_ones() const;
};

/// Spectral radius of sinr_target * D^-1 * C_off, computed with Eigen's dense eigensolver.
double interference_spectral_radius(const Eigen::MatrixXd &gain_matrix, double sinr_target);

/// Componentwise-minimal powers meeting every SINR target with equality, or status=infeasible
/// when the spectral radius of sinr_target * D^-1 * C_off is not below one.
SolveReport solve_linear_power_control(const LinearPowerControlProblem &problem);

// One concave constraint on x in R^n:
//   sum_t weight_t * log(coeffs_t . x + offset_t) + affine . x + affine_offset >= rhs
struct LogTerm
{
    double weight = 1.0;
    Eigen::VectorXd coeffs;
    double offset = 0.0;
};

struct ConcaveConstraint
{
    std::vector<LogTerm> log_terms;
    Eigen::VectorXd affine; // empty means zero
    double affine_offset = 0.0;
    double rhs = 0.0;

    /// Value minus rhs; +infinity-safe only inside the log domain. Returns NaN outside it.
    double slack(const Eigen::VectorXd &x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd &x) const;
    /// Hessian of the left-hand side (negative semidefinite for positive weights).
    Eigen::MatrixXd hessian(const Eigen::VectorXd &x) const;
};

using ConcaveConstraintSpec = std::vector<ConcaveConstraint>;

struct BarrierOptions
{
    double mu = 10.0;
    double gap_tolerance = 1e-8;
    int max_newton_steps = 500; // per centering step
    double line_search_alpha = 0.25;
    double line_search_beta = 0.5;
    double initial_t = 0.0; // 0 selects (#barrier terms) / objective(start)
};

/// Minimises objective . x subject to every constraint and x > 0 by the log-barrier
/// path-following method. `start` must be strictly feasible; throws std::invalid_argument otherwise.
SolveReport barrier_newton(const Eigen::VectorXd &objective, const ConcaveConstraintSpec &constraints,
                           const Eigen::VectorXd &start, const BarrierOptions &options = {});

/// Stationarity residual of the barrier KKT system at x for barrier parameter t, scaled by max(1, |c|_inf).
double barrier_kkt_residual(const Eigen::VectorXd &objective, const ConcaveConstraintSpec &constraints,
                            const Eigen::VectorXd &x, double t);

} // namespace hynoma

#endif
