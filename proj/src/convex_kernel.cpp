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

#include "hynoma/convex_kernel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hynoma
{

const char *to_string(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::max_iterations:
        return "max_iterations";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------------------------
// Linear power control

void LinearPowerControlProblem::validate() const
{
    const auto k = gain_matrix.rows();
    if (k == 0 || gain_matrix.cols() != k)
        throw std::invalid_argument("gain matrix must be square and non-empty");
    if (!gain_matrix.allFinite())
        throw std::invalid_argument("gain matrix must be finite");
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c)
        {
            if (r == c && !(gain_matrix(r, c) > 0.0))
                throw std::invalid_argument("gain matrix diagonal must be strictly positive");
            if (r != c && gain_matrix(r, c) < 0.0)
                throw std::invalid_argument("gain matrix off-diagonal must be non-negative");
        }
    if (!std::isfinite(sinr_target) || sinr_target < 0.0)
        throw std::invalid_argument("SINR target must be finite and non-negative");
    if (noise.size() != 0 && (noise.size() != k || (noise.array() <= 0.0).any()))
        throw std::invalid_argument("noise vector must be empty or positive with one entry per user");
}

Eigen::VectorXd LinearPowerControlProblem::noise_or_ones() const
{
    return noise.size() == 0 ? Eigen::VectorXd::Ones(gain_matrix.rows()) : noise;
}

namespace
{

Eigen::MatrixXd normalized_coupling(const Eigen::MatrixXd &gain_matrix, double sinr_target)
{
    Eigen::MatrixXd a = gain_matrix;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
    {
        const double d = gain_matrix(r, r);
        a.row(r) *= sinr_target / d;
        a(r, r) = 0.0;
    }
    return a;
}

} // namespace

double interference_spectral_radius(const Eigen::MatrixXd &gain_matrix, double sinr_target)
{
    const Eigen::MatrixXd a = normalized_coupling(gain_matrix, sinr_target);
    if (a.rows() == 1)
        return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue computation failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

SolveReport solve_linear_power_control(const LinearPowerControlProblem &problem)
{
    problem.validate();
    const auto k = problem.gain_matrix.rows();
    const double tau = problem.sinr_target;
    const Eigen::VectorXd noise = problem.noise_or_ones();

    SolveReport report;
    report.spectral_radius = interference_spectral_radius(problem.gain_matrix, tau);
    if (!(report.spectral_radius < 1.0 - 1e-12))
    {
        std::ostringstream msg;
        msg << "interference-limited: spectral radius " << report.spectral_radius << " >= 1 at SINR target " << tau;
        report.status = SolveStatus::infeasible;
        report.diagnostic = msg.str();
        report.objective = std::numeric_limits<double>::infinity();
        return report;
    }

    // (D - tau * C_off) P = tau * noise
    Eigen::MatrixXd system = -tau * problem.gain_matrix;
    system.diagonal() = problem.gain_matrix.diagonal();
    Eigen::VectorXd p = system.fullPivLu().solve(tau * noise);

    if (!p.allFinite() || (p.array() < -1e-12 * (1.0 + p.cwiseAbs().maxCoeff())).any())
    {
        report.status = SolveStatus::infeasible;
        report.diagnostic = "linear system returned a non-physical power vector";
        report.objective = std::numeric_limits<double>::infinity();
        return report;
    }
    p = p.cwiseMax(0.0);

    double worst = 0.0;
    for (Eigen::Index r = 0; r < k; ++r)
    {
        const double interference = problem.gain_matrix.row(r).dot(p) - problem.gain_matrix(r, r) * p[r];
        const double sinr = problem.gain_matrix(r, r) * p[r] / (interference + noise[r]);
        worst = std::max(worst, std::abs(sinr - tau) / std::max(1.0, tau));
    }

    report.status = SolveStatus::optimal;
    report.solution = std::move(p);
    report.objective = report.solution.sum();
    report.iterations = 1;
    report.kkt_residual = worst;
    return report;
}

// ---------------------------------------------------------------------------------------------
// Concave constraints

// Near the end of the central path the slack is many orders of magnitude below the individual
// terms, so it is accumulated in extended precision.
double ConcaveConstraint::slack(const Eigen::VectorXd &x) const
{
    long double value = static_cast<long double>(affine_offset) - static_cast<long double>(rhs);
    for (Eigen::Index i = 0; i < affine.size(); ++i)
        value += static_cast<long double>(affine[i]) * x[i];
    for (const auto &term : log_terms)
    {
        long double arg = term.offset;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            arg += static_cast<long double>(term.coeffs[i]) * x[i];
        if (!(arg > 0.0L))
            return std::numeric_limits<double>::quiet_NaN();
        value += static_cast<long double>(term.weight) * std::log(arg);
    }
    return static_cast<double>(value);
}

Eigen::VectorXd ConcaveConstraint::gradient(const Eigen::VectorXd &x) const
{
    Eigen::VectorXd g = affine.size() != 0 ? affine : Eigen::VectorXd::Zero(x.size());
    for (const auto &term : log_terms)
        g += (term.weight / (term.coeffs.dot(x) + term.offset)) * term.coeffs;
    return g;
}

Eigen::MatrixXd ConcaveConstraint::hessian(const Eigen::VectorXd &x) const
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (const auto &term : log_terms)
    {
        const double arg = term.coeffs.dot(x) + term.offset;
        h.noalias() -= (term.weight / (arg * arg)) * term.coeffs * term.coeffs.transpose();
    }
    return h;
}

// ---------------------------------------------------------------------------------------------
// Barrier method

namespace
{

bool strictly_inside(const ConcaveConstraintSpec &constraints, const Eigen::VectorXd &x)
{
    if (!x.allFinite() || (x.array() <= 0.0).any())
        return false;
    for (const auto &c : constraints)
    {
        const double s = c.slack(x);
        if (!(s > 0.0))
            return false;
    }
    return true;
}

// phi(x_new) - phi(x_old) for phi = t c.x - sum log slack - sum log x, evaluated through ratios
// so the comparison keeps precision when phi itself is large.
double barrier_change(const Eigen::VectorXd &objective, const ConcaveConstraintSpec &constraints,
                      const Eigen::VectorXd &x_old, const std::vector<double> &slack_old,
                      const Eigen::VectorXd &x_new, std::vector<double> &slack_new, double t)
{
    double change = t * objective.dot(x_new - x_old);
    for (std::size_t j = 0; j < constraints.size(); ++j)
    {
        slack_new[j] = constraints[j].slack(x_new);
        change -= std::log(slack_new[j] / slack_old[j]);
    }
    for (Eigen::Index i = 0; i < x_new.size(); ++i)
        change -= std::log(x_new[i] / x_old[i]);
    return change;
}

} // namespace

double barrier_kkt_residual(const Eigen::VectorXd &objective, const ConcaveConstraintSpec &constraints,
                            const Eigen::VectorXd &x, double t)
{
    Eigen::VectorXd r = objective;
    for (const auto &c : constraints)
        r -= c.gradient(x) / (t * c.slack(x));
    r.array() -= 1.0 / (t * x.array());
    return r.lpNorm<Eigen::Infinity>() / std::max(1.0, objective.lpNorm<Eigen::Infinity>());
}

SolveReport barrier_newton(const Eigen::VectorXd &objective, const ConcaveConstraintSpec &constraints,
                           const Eigen::VectorXd &start, const BarrierOptions &options)
{
    const auto n = objective.size();
    if (n == 0 || start.size() != n)
        throw std::invalid_argument("objective and start point must have the same non-zero dimension");
    for (const auto &c : constraints)
    {
        if (c.affine.size() != 0 && c.affine.size() != n)
            throw std::invalid_argument("affine part has the wrong dimension");
        for (const auto &term : c.log_terms)
            if (term.coeffs.size() != n)
                throw std::invalid_argument("log term has the wrong dimension");
    }
    if (!strictly_inside(constraints, start))
        throw std::invalid_argument("barrier method needs a strictly feasible start (all slacks > 0, x > 0)");

    const double n_barrier = static_cast<double>(constraints.size()) + static_cast<double>(n);
    double t = options.initial_t;
    if (!(t > 0.0))
        t = n_barrier / std::max(std::abs(objective.dot(start)), 1e-6);

    Eigen::VectorXd x = start;
    std::vector<double> slack(constraints.size()), trial_slack(constraints.size());
    for (std::size_t j = 0; j < constraints.size(); ++j)
        slack[j] = constraints[j].slack(x);

    SolveReport report;
    report.status = SolveStatus::optimal;

    // Last point that finished centering cleanly, kept for when the next t is past the
    // resolution of double-precision iterates.
    Eigen::VectorXd x_centred;
    double t_centred = 0.0;

    while (true)
    {
        // Centering by damped Newton.
        bool stalled = false;
        int steps = 0;
        for (;; ++steps)
        {
            if (steps >= options.max_newton_steps)
            {
                if (x_centred.size() != 0)
                {
                    stalled = true; // noise-driven steps past the resolution limit
                    break;
                }
                report.status = SolveStatus::max_iterations;
                report.diagnostic = "Newton centering did not converge within the step limit";
                break;
            }

            Eigen::VectorXd grad = t * objective;
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
            for (std::size_t j = 0; j < constraints.size(); ++j)
            {
                const Eigen::VectorXd gj = constraints[j].gradient(x);
                grad -= gj / slack[j];
                hess.noalias() += gj * gj.transpose() / (slack[j] * slack[j]);
                hess.noalias() -= constraints[j].hessian(x) / slack[j];
            }
            grad.array() -= 1.0 / x.array();
            hess.diagonal().array() += 1.0 / x.array().square();

            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            Eigen::VectorXd step = ldlt.solve(-grad);
            if (ldlt.info() != Eigen::Success || !step.allFinite())
            {
                report.status = SolveStatus::max_iterations;
                report.diagnostic = "singular Newton system";
                break;
            }
            const double decrement2 = -grad.dot(step);
            ++report.iterations;
            // The decrement alone under-weights coordinates pinned near zero, where the Hessian is huge.
            if (decrement2 <= 2e-10 && barrier_kkt_residual(objective, constraints, x, t) < 1e-9)
                break;

            double s = 1.0;
            while (s > 1e-16 && !strictly_inside(constraints, x + s * step))
                s *= options.line_search_beta;
            Eigen::VectorXd candidate = x + s * step;
            double change = 0.0;
            while (s > 1e-16)
            {
                candidate = x + s * step;
                change = barrier_change(objective, constraints, x, slack, candidate, trial_slack, t);
                if (change <= -options.line_search_alpha * s * decrement2)
                    break;
                s *= options.line_search_beta;
            }
            if (s <= 1e-16 || !(change < 0.0))
            {
                stalled = true;
                break;
            }
            x = candidate;
            slack = trial_slack;
        }
        if (report.status != SolveStatus::optimal)
            break;

        if (stalled && x_centred.size() != 0 &&
            !(barrier_kkt_residual(objective, constraints, x, t) < 1e-6))
        {
            x = x_centred;
            t = t_centred;
            report.diagnostic = "stopped at the floating-point resolution of the central path";
            break;
        }
        x_centred = x;
        t_centred = t;

        report.outer_objectives.push_back(objective.dot(x));
        if (n_barrier / t < options.gap_tolerance * std::max(1.0, std::abs(report.outer_objectives.back())))
            break;
        t *= options.mu;
    }

    report.solution = x;
    report.objective = objective.dot(x);
    report.kkt_residual = barrier_kkt_residual(objective, constraints, x, t);
    if (report.status == SolveStatus::optimal && !(report.kkt_residual < 1e-6))
    {
        report.status = SolveStatus::max_iterations;
        report.diagnostic = "KKT residual above tolerance after the final centering step";
    }
    return report;
}

} // namespace hynoma
