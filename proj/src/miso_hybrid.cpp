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

#include "hynoma/miso_hybrid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hynoma
{

double miso_energy(const Eigen::VectorXd &p, const Eigen::VectorXd &e, std::size_t m_users)
{
    return static_cast<double>(m_users) * p.sum() + static_cast<double>(e.size()) * e.sum();
}

MisoAllocation solve_miso_oma(const EffectiveGains &gains, double target_rate)
{
    if (!std::isfinite(target_rate) || target_rate < 0.0)
        throw std::invalid_argument("target rate must be finite and non-negative");
    const auto k = gains.c.rows();

    LinearPowerControlProblem problem;
    problem.gain_matrix = gains.c;
    problem.sinr_target = std::expm1(target_rate);
    const SolveReport report = solve_linear_power_control(problem);

    MisoAllocation out;
    out.p = Eigen::VectorXd::Zero(k);
    out.status = report.status;
    out.diagnostic = report.diagnostic;
    if (report.status != SolveStatus::optimal)
    {
        out.e = Eigen::VectorXd::Zero(k);
        out.energy = std::numeric_limits<double>::infinity();
        return out;
    }
    out.e = report.solution;
    out.energy = static_cast<double>(k) * out.e.sum();
    out.sca_trace = {out.energy};
    return out;
}

double feasibility_ceiling(const Eigen::MatrixXd &c)
{
    Eigen::MatrixXd off = c;
    off.diagonal().setZero();
    if ((off.array() == 0.0).all())
        return std::numeric_limits<double>::infinity();

    LinearPowerControlProblem problem;
    problem.gain_matrix = c;
    const auto feasible = [&](double tau) {
        problem.sinr_target = tau;
        return solve_linear_power_control(problem).status == SolveStatus::optimal;
    };

    double lo = 0.0, hi = 1.0;
    while (feasible(hi))
    {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return std::log1p(0.5 * (lo + hi));
}

double feasibility_ceiling(const EffectiveGains &gains)
{
    return feasibility_ceiling(gains.c);
}

double hybrid_constraint_slack(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                               const Eigen::VectorXd &p, const Eigen::VectorXd &e)
{
    const double weight = static_cast<double>(m_users) / static_cast<double>(gains.k_users());
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &r : rates_hybrid(gains, p, e))
    {
        worst = std::min(worst, weight * r.g1_decode + r.phase2 - target_rate);
        worst = std::min(worst, weight * r.g2_direct + r.phase2 - target_rate);
    }
    return worst;
}

ConcaveConstraintSpec sca_subproblem(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                                     const Eigen::VectorXd &p0, const Eigen::VectorXd &e0)
{
    const auto k_users = gains.c.rows();
    const double weight = static_cast<double>(m_users) / static_cast<double>(k_users);
    const Eigen::Index n = 2 * k_users;

    ConcaveConstraintSpec spec;
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        // Second-phase part: log(c_k.e + 1) - log(c~_k.e + 1), the subtracted log replaced by its tangent.
        Eigen::VectorXd c_tilde = gains.c.row(k).transpose();
        c_tilde[k] = 0.0;
        const double q0 = c_tilde.dot(e0) + 1.0;

        LogTerm phase2;
        phase2.weight = 1.0;
        phase2.coeffs = Eigen::VectorXd::Zero(n);
        phase2.coeffs.tail(k_users) = gains.c.row(k).transpose();
        phase2.offset = 1.0;

        const auto add_family = [&](const Eigen::MatrixXd &table, double floor) {
            Eigen::VectorXd x_tilde = table.row(k).transpose();
            x_tilde[k] = 0.0;
            const double s0 = x_tilde.dot(p0) + floor;

            ConcaveConstraint con;
            LogTerm phase1;
            phase1.weight = weight;
            phase1.coeffs = Eigen::VectorXd::Zero(n);
            phase1.coeffs.head(k_users) = table.row(k).transpose();
            phase1.offset = floor;
            con.log_terms = {phase1, phase2};

            // -log(s) >= -log(s0) - (s - s0)/s0 is the concave minorant used for both subtracted logs.
            con.affine = Eigen::VectorXd::Zero(n);
            con.affine.head(k_users) = -(weight / s0) * x_tilde;
            con.affine.tail(k_users) = -(1.0 / q0) * c_tilde;
            con.affine_offset = -weight * (std::log(s0) - x_tilde.dot(p0) / s0) - (std::log(q0) - c_tilde.dot(e0) / q0);
            con.rhs = target_rate;
            spec.push_back(std::move(con));
        };
        add_family(gains.h, gains.d[k]);
        add_family(gains.g, gains.b[k]);
    }
    return spec;
}

namespace
{

// Strictly feasible (p, e) for the original constraints, or nothing.
bool find_start(const EffectiveGains &gains, std::size_t m_users, double target_rate, const ScaOptions &options,
                Eigen::VectorXd &p, Eigen::VectorXd &e)
{
    const auto k_users = gains.c.rows();
    const double eps = options.start_perturbation;

    const MisoAllocation oma = solve_miso_oma(gains, target_rate);
    if (oma.feasible())
    {
        p = Eigen::VectorXd::Constant(k_users, eps);
        for (double scale = eps; scale < 1.0; scale *= 2.0)
        {
            e = (oma.e * (1.0 + scale)).cwiseMax(std::numeric_limits<double>::min());
            if (hybrid_constraint_slack(gains, m_users, target_rate, p, e) > 0.0)
                return true;
        }
    }

    // Second phase carries part of the rate below its ceiling; the first phase grows to cover the rest.
    const double ceiling = feasibility_ceiling(gains);
    for (double fraction : {0.5, 0.25, 0.75, 0.9, 0.1, 0.0})
    {
        const double phase2_rate = std::isfinite(ceiling) ? std::min(target_rate, fraction * ceiling)
                                                           : fraction * target_rate;
        const MisoAllocation partial = solve_miso_oma(gains, phase2_rate);
        if (!partial.feasible())
            continue;
        e = partial.e.cwiseMax(1e-12);
        double level = eps;
        for (int it = 0; it <= options.max_doublings; ++it, level *= 2.0)
        {
            p = Eigen::VectorXd::Constant(k_users, level);
            if (hybrid_constraint_slack(gains, m_users, target_rate, p, e) > 0.0)
                return true;
        }
    }
    return false;
}

} // namespace

MisoAllocation solve_miso_hybrid_sca(const EffectiveGains &gains, std::size_t m_users, double target_rate,
                                     const ScaOptions &options)
{
    const auto k_users = gains.c.rows();
    if (k_users < 1 || m_users <= std::size_t(k_users))
        throw std::invalid_argument("hybrid allocation needs M > K >= 1");
    if (!std::isfinite(target_rate) || target_rate < 0.0)
        throw std::invalid_argument("target rate must be finite and non-negative");

    MisoAllocation out;
    if (target_rate == 0.0)
    {
        out.p = out.e = Eigen::VectorXd::Zero(k_users);
        out.status = SolveStatus::optimal;
        out.sca_trace = {0.0};
        return out;
    }

    Eigen::VectorXd p, e;
    if (!find_start(gains, m_users, target_rate, options, p, e))
    {
        out.p = out.e = Eigen::VectorXd::Zero(k_users);
        out.energy = std::numeric_limits<double>::infinity();
        out.status = SolveStatus::infeasible;
        out.diagnostic = "no strictly feasible starting point found";
        return out;
    }

    Eigen::VectorXd objective(2 * k_users);
    objective.head(k_users).setConstant(static_cast<double>(m_users));
    objective.tail(k_users).setConstant(static_cast<double>(k_users));

    Eigen::VectorXd x(2 * k_users);
    x << p, e;
    double current = objective.dot(x);
    out.sca_trace.push_back(current);
    out.status = SolveStatus::max_iterations;

    for (int it = 0; it < options.max_iterations; ++it)
    {
        const auto spec = sca_subproblem(gains, m_users, target_rate, x.head(k_users), x.tail(k_users));
        SolveReport step;
        try
        {
            step = barrier_newton(objective, spec, x, options.barrier);
        }
        catch (const std::invalid_argument &)
        {
            // The iterate sits on the subproblem boundary to rounding precision: nothing left to gain.
            out.status = SolveStatus::optimal;
            break;
        }
        out.max_kkt_residual = std::max(out.max_kkt_residual, step.kkt_residual);
        if (step.status != SolveStatus::optimal)
        {
            out.diagnostic = std::string("inner solve: ") + step.diagnostic;
            break;
        }

        const Eigen::VectorXd next = step.solution;
        const double value = objective.dot(next);
        if (!(value <= current) ||
            !(hybrid_constraint_slack(gains, m_users, target_rate, next.head(k_users), next.tail(k_users)) >= -1e-10))
        {
            out.status = SolveStatus::optimal; // no further descent available from the current iterate
            break;
        }

        const double change = (current - value) / std::max(current, std::numeric_limits<double>::min());
        x = next;
        current = value;
        out.sca_trace.push_back(current);
        if (change < options.relative_tolerance)
        {
            out.status = SolveStatus::optimal;
            break;
        }
    }

    out.p = x.head(k_users);
    out.e = x.tail(k_users);
    out.energy = miso_energy(out.p, out.e, m_users);

    // The start carries an epsilon premium over OMA; never hand back more than the OMA point.
    const MisoAllocation oma = solve_miso_oma(gains, target_rate);
    if (oma.feasible() && oma.energy <= out.energy)
    {
        out.p = oma.p;
        out.e = oma.e;
        out.energy = oma.energy;
        out.sca_trace.push_back(oma.energy);
    }
    return out;
}

} // namespace hynoma
