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

#include "hynoma/oracle_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hynoma
{

std::size_t GridAxis::points() const
{
    return static_cast<std::size_t>(std::floor((upper - lower) / step + 1e-9)) + 1;
}

void GridSpec::validate() const
{
    if (axes.empty() || axes.size() > max_dimension)
        throw std::invalid_argument("grid dimension must be between 1 and " + std::to_string(max_dimension));
    double total = 1.0;
    for (const auto &axis : axes)
    {
        if (!std::isfinite(axis.lower) || !std::isfinite(axis.upper) || axis.upper < axis.lower)
            throw std::invalid_argument("grid bounds must be finite with lower <= upper");
        if (!(axis.step > 0.0) || !std::isfinite(axis.step))
            throw std::invalid_argument("grid step must be positive");
        total *= static_cast<double>(axis.points());
    }
    if (total > max_points)
        throw std::invalid_argument("grid has more than 1e8 points");
}

std::size_t GridSpec::total_points() const
{
    std::size_t total = 1;
    for (const auto &axis : axes)
        total *= axis.points();
    return total;
}

double GridSpec::step_sum() const
{
    double sum = 0.0;
    for (const auto &axis : axes)
        sum += axis.step;
    return sum;
}

GridSpec GridSpec::cube(std::size_t dimension, double lower, double upper, std::size_t points_per_axis)
{
    if (points_per_axis < 2)
        throw std::invalid_argument("need at least two points per axis");
    GridSpec grid;
    grid.axes.assign(dimension, GridAxis{lower, upper, (upper - lower) / static_cast<double>(points_per_axis - 1)});
    return grid;
}

double oracle_slot_rate(const std::vector<double> &gains, const Eigen::MatrixXd &powers, std::size_t m,
                        std::size_t i)
{
    const auto col = Eigen::Index(i);
    double interference = 0.0;
    for (std::size_t j = i; j < m; ++j)
        interference += powers(Eigen::Index(j), col);

    const double own = powers(Eigen::Index(m), col);
    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t k = i; k <= m; ++k)
        rate = std::min(rate, std::log(1.0 + gains[k] * own / (gains[k] * interference + 1.0)));
    return rate;
}

namespace
{

// Calls visit(point) for every point of the grid in lexicographic order (last axis fastest).
template <typename Visit> void for_each_point(const GridSpec &grid, Visit &&visit)
{
    const std::size_t dim = grid.axes.size();
    std::vector<std::size_t> counts(dim), index(dim, 0);
    std::vector<double> point(dim);
    for (std::size_t a = 0; a < dim; ++a)
    {
        counts[a] = grid.axes[a].points();
        point[a] = grid.axes[a].lower;
    }
    while (true)
    {
        visit(point);
        std::size_t a = dim;
        while (a > 0)
        {
            --a;
            if (++index[a] < counts[a])
            {
                point[a] = grid.axes[a].value(index[a]);
                break;
            }
            index[a] = 0;
            point[a] = grid.axes[a].lower;
            if (a == 0)
                return;
        }
    }
}

} // namespace

GridOptimum grid_search_siso(const SisoScenario &scenario, std::size_t m, const Eigen::MatrixXd &prior,
                             const GridSpec &grid)
{
    scenario.validate();
    const std::size_t n = scenario.n_users();
    if (m >= n)
        throw std::invalid_argument("user index out of range");
    if (grid.axes.size() != m)
        throw std::invalid_argument("grid needs one axis per shared slot 0..m-1");
    if (m > 0)
        grid.validate();
    if (prior.rows() < Eigen::Index(m) || prior.cols() < Eigen::Index(m + 1))
        throw std::invalid_argument("prior power matrix too small");

    Eigen::MatrixXd work = Eigen::MatrixXd::Zero(Eigen::Index(m + 1), Eigen::Index(m + 1));
    work.topRows(Eigen::Index(m)) = prior.topLeftCorner(Eigen::Index(m), Eigen::Index(m + 1));

    // In its own slot user m is alone, so the cheapest own-slot power for a given shared-slot
    // choice is the inverse of log(1 + g P).
    const double own_gain = scenario.gains[m];
    const auto evaluate = [&](const std::vector<double> &shared, GridOptimum &best) {
        double energy = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            work(Eigen::Index(m), Eigen::Index(i)) = shared[i];
            energy += shared[i];
        }
        double rate = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            rate += oracle_slot_rate(scenario.gains, work, m, i);
        const double own = std::max(0.0, std::expm1(scenario.target_rate - rate) / own_gain);
        energy = scenario.slot_duration * (energy + own);
        ++best.feasible_points;
        if (energy < best.energy)
        {
            best.energy = energy;
            best.powers = shared;
            best.powers.push_back(own);
        }
    };

    GridOptimum best;
    best.energy = std::numeric_limits<double>::infinity();
    if (m == 0)
        evaluate({}, best);
    else
        for_each_point(grid, [&](const std::vector<double> &point) { evaluate(point, best); });
    if (best.powers.empty() || !std::isfinite(best.energy))
        throw std::runtime_error("no grid point meets the rate target; widen the grid bounds");
    return best;
}

GridOptimum grid_search_siso_refined(const SisoScenario &scenario, std::size_t m, const Eigen::MatrixXd &prior,
                                     std::size_t points_per_axis, int passes)
{
    scenario.validate();
    if (m >= scenario.n_users())
        throw std::invalid_argument("user index out of range");
    if (m == 0)
        return grid_search_siso(scenario, 0, prior, GridSpec{});

    // Serving user m alone in its own slot is always feasible, so 2x that power bounds every slot.
    const double oma = std::expm1(scenario.target_rate) / scenario.gains[m];
    GridSpec grid = GridSpec::cube(m, 0.0, 2.0 * std::max(oma, 1e-300), points_per_axis);
    GridOptimum best = grid_search_siso(scenario, m, prior, grid);

    for (int pass = 0; pass < passes; ++pass)
    {
        for (std::size_t a = 0; a < m; ++a)
        {
            const double step = grid.axes[a].step;
            const double lo = std::max(0.0, best.powers[a] - 4.0 * step);
            const double hi = best.powers[a] + 4.0 * step;
            grid.axes[a] = GridAxis{lo, hi, (hi - lo) / static_cast<double>(points_per_axis - 1)};
        }
        GridOptimum next = grid_search_siso(scenario, m, prior, grid);
        if (next.energy <= best.energy)
            best = next;
    }
    return best;
}

ParetoVerdict pareto_scan_two_user(const SisoScenario &scenario, const Eigen::MatrixXd &candidate,
                                   const GridSpec &grid)
{
    scenario.validate();
    grid.validate();
    if (scenario.n_users() != 2 || grid.axes.size() != 3)
        throw std::invalid_argument("Pareto scan needs two users and a grid over (P11, P21, P22)");
    if (candidate.rows() != 2 || candidate.cols() != 2)
        throw std::invalid_argument("candidate schedule must be 2x2");

    const double t = scenario.slot_duration;
    const double e1c = t * candidate(0, 0);
    const double e2c = t * (candidate(1, 0) + candidate(1, 1));

    ParetoVerdict verdict;
    verdict.tolerance = t * grid.step_sum();
    const double tol = verdict.tolerance;
    const double target = scenario.target_rate - 1e-12;

    Eigen::MatrixXd work = Eigen::MatrixXd::Zero(2, 2);
    for_each_point(grid, [&](const std::vector<double> &point) {
        if (verdict.dominated)
            return;
        const double e1 = t * point[0];
        const double e2 = t * (point[1] + point[2]);
        if (e1 > e1c + tol || e2 > e2c + tol || (e1 >= e1c - tol && e2 >= e2c - tol))
            return;
        work(0, 0) = point[0];
        work(1, 0) = point[1];
        work(1, 1) = point[2];
        if (oracle_slot_rate(scenario.gains, work, 0, 0) < target)
            return;
        if (oracle_slot_rate(scenario.gains, work, 1, 0) + oracle_slot_rate(scenario.gains, work, 1, 1) < target)
            return;
        verdict.dominated = true;
        verdict.best_e1 = e1;
        verdict.best_e2 = e2;
    });
    return verdict;
}

SpectralEstimate spectral_estimate(const Eigen::MatrixXd &c, double tau, double tolerance)
{
    const auto k = c.rows();
    if (k == 0 || c.cols() != k)
        throw std::invalid_argument("gain matrix must be square and non-empty");

    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index j = 0; j < k; ++j)
            if (r != j)
                b(r, j) += tau * c(r, j) / c(r, r);

    SpectralEstimate out;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(k);
    for (out.iterations = 1; out.iterations <= 200000; ++out.iterations)
    {
        const Eigen::VectorXd y = b * x;
        const Eigen::ArrayXd ratio = y.array() / x.array();
        out.lower = ratio.minCoeff() - 1.0;
        out.upper = ratio.maxCoeff() - 1.0;
        x = y / y.maxCoeff();
        if (out.upper - out.lower < tolerance)
            break;
    }
    out.feasible = 0.5 * (out.lower + out.upper) < 1.0;
    return out;
}

bool spectral_feasibility(const Eigen::MatrixXd &c, double tau)
{
    return spectral_estimate(c, tau).feasible;
}

} // namespace hynoma
