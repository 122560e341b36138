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

#include "hynoma/experiments.hpp"
#include "hynoma/miso_hybrid.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hynoma;

namespace
{

EffectiveGains single_user(double g, double c)
{
    EffectiveGains out;
    out.g = Eigen::MatrixXd::Constant(1, 1, g);
    out.h = out.g;
    out.c = Eigen::MatrixXd::Constant(1, 1, c);
    out.b = Eigen::VectorXd::Ones(1);
    out.d = Eigen::VectorXd::Ones(1);
    out.assignment = {0};
    return out;
}

// min M p + e  s.t.  M log(1 + g p) + log(1 + c e) >= R  (K = 1): both powers share one level.
double single_user_reference(double m, double g, double c, double rate)
{
    const auto achieved = [&](double level) {
        return m * std::log(std::max(level * g, 1.0)) + std::log(std::max(level * c, 1.0));
    };
    double lo = 0.0, hi = 1.0;
    while (achieved(hi) < rate)
        hi *= 2.0;
    for (int it = 0; it < 300; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (achieved(mid) < rate ? lo : hi) = mid;
    }
    return m * std::max(0.0, hi - 1.0 / g) + std::max(0.0, hi - 1.0 / c);
}

// Same problem on a p grid, with e set to its least feasible value.
double single_user_grid(double m, double g, double c, double rate, double p_max, int points)
{
    double best = INFINITY;
    for (int i = 0; i < points; ++i)
    {
        const double p = p_max * i / (points - 1);
        const double rest = rate - m * std::log1p(g * p);
        const double e = std::max(0.0, std::expm1(rest) / c);
        best = std::min(best, m * p + e);
    }
    return best;
}

EffectiveGains three_user_gains()
{
    EffectiveGains gains;
    gains.g.resize(3, 3);
    gains.g << 3.0, 0.2, 0.1, 0.3, 2.5, 0.2, 0.1, 0.4, 4.0;
    gains.h.resize(3, 3);
    gains.h << 6.0, 0.1, 0.3, 0.2, 5.0, 0.1, 0.2, 0.1, 7.0;
    gains.c.resize(3, 3);
    gains.c << 2.0, 0.3, 0.2, 0.25, 3.0, 0.4, 0.1, 0.2, 2.5;
    gains.b = Eigen::Vector3d(1.5, 2.0, 1.2);
    gains.d = Eigen::Vector3d(1.1, 1.3, 1.4);
    gains.assignment = {0, 1, 2};
    return gains;
}

} // namespace

TEST_SUITE("miso_hybrid")
{
    TEST_CASE("OMA equals linear power control on the second-phase gains")
    {
        const auto gains = three_user_gains();
        const auto oma = solve_miso_oma(gains, 1.0);
        REQUIRE(oma.feasible());
        CHECK(oma.p.isZero());
        for (Eigen::Index k = 0; k < 3; ++k)
        {
            const double interference = gains.c.row(k).dot(oma.e) - gains.c(k, k) * oma.e[k];
            CHECK(gains.c(k, k) * oma.e[k] / (interference + 1.0) == doctest::Approx(std::expm1(1.0)).epsilon(1e-10));
        }
        CHECK(oma.energy == doctest::Approx(3.0 * oma.e.sum()));
        CHECK(miso_energy(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 1), 10) == doctest::Approx(69.0));
    }

    TEST_CASE("OMA feasibility ceiling matches the eigenvalue crossing")
    {
        const auto gains = three_user_gains();
        const double ceiling = feasibility_ceiling(gains);
        REQUIRE(std::isfinite(ceiling));
        // rho(tau D^-1 C_off) is linear in tau, so the crossing is 1 / rho(D^-1 C_off).
        Eigen::MatrixXd m = gains.c;
        for (Eigen::Index k = 0; k < 3; ++k)
        {
            m.row(k) /= gains.c(k, k);
            m(k, k) = 0.0;
        }
        const double rho = m.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(ceiling == doctest::Approx(std::log1p(1.0 / rho)).epsilon(1e-9));
        CHECK(solve_miso_oma(gains, ceiling * 0.999).feasible());
        CHECK_FALSE(solve_miso_oma(gains, ceiling * 1.001).feasible());
        CHECK(std::isinf(solve_miso_oma(gains, ceiling * 1.001).energy));

        CHECK(std::isinf(feasibility_ceiling(Eigen::MatrixXd::Identity(2, 2))));
    }

    TEST_CASE("single far user reduces to two-resource water-filling")
    {
        for (double rate : {0.5, 2.0, 5.0})
            for (std::size_t m : {2, 5})
            {
                const double g = 0.7, c = 1.9;
                const auto gains = single_user(g, c);
                const auto hyb = solve_miso_hybrid_sca(gains, m, rate);
                REQUIRE(hyb.feasible());
                const double ref = single_user_reference(double(m), g, c, rate);
                CHECK(hyb.energy == doctest::Approx(ref).epsilon(1e-5));
                const double grid = single_user_grid(double(m), g, c, rate, std::expm1(rate) / g, 200001);
                CHECK(grid == doctest::Approx(ref).epsilon(1e-5));
            }
    }

    TEST_CASE("tangent bounds are tight at the linearization point and conservative elsewhere")
    {
        const auto gains = three_user_gains();
        const Eigen::Vector3d p0(0.4, 0.2, 0.3), e0(1.0, 0.5, 0.8);
        const double rate = 1.5;
        const auto spec = sca_subproblem(gains, 10, rate, p0, e0);
        REQUIRE(spec.size() == 6);
        Eigen::VectorXd x0(6);
        x0 << p0, e0;
        double worst = INFINITY;
        for (const auto &con : spec)
            worst = std::min(worst, con.slack(x0));
        CHECK(worst == doctest::Approx(hybrid_constraint_slack(gains, 10, rate, p0, e0)).epsilon(1e-12));

        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.0, 3.0);
        for (int n = 0; n < 200; ++n)
        {
            Eigen::VectorXd x(6);
            for (int i = 0; i < 6; ++i)
                x[i] = u(rng);
            double sub = INFINITY;
            for (const auto &con : spec)
                sub = std::min(sub, con.slack(x));
            CHECK(sub <= hybrid_constraint_slack(gains, 10, rate, x.head(3), x.tail(3)) + 1e-12);
        }
    }

    TEST_CASE("SCA is feasible, monotone and never worse than OMA")
    {
        const auto gains = three_user_gains();
        for (double rate : {0.5, 1.0, 2.0, 3.0})
        {
            const auto oma = solve_miso_oma(gains, rate);
            const auto hyb = solve_miso_hybrid_sca(gains, 10, rate);
            REQUIRE(hyb.feasible());
            CHECK(hybrid_constraint_slack(gains, 10, rate, hyb.p, hyb.e) >= -1e-8);
            for (std::size_t i = 1; i < hyb.sca_trace.size(); ++i)
                CHECK(hyb.sca_trace[i] <= hyb.sca_trace[i - 1] + 1e-12);
            CHECK(hyb.energy == doctest::Approx(miso_energy(hyb.p, hyb.e, 10)));
            if (oma.feasible())
                CHECK(hyb.energy <= oma.energy + 1e-6);
            CHECK(hyb.max_kkt_residual < 1e-6);
        }
    }

    TEST_CASE("SCA stays finite beyond the OMA ceiling")
    {
        const auto gains = three_user_gains();
        const double rate = feasibility_ceiling(gains) + 1.0;
        CHECK_FALSE(solve_miso_oma(gains, rate).feasible());
        const auto hyb = solve_miso_hybrid_sca(gains, 10, rate);
        REQUIRE(hyb.feasible());
        CHECK(std::isfinite(hyb.energy));
        CHECK(hybrid_constraint_slack(gains, 10, rate, hyb.p, hyb.e) >= -1e-8);
    }

    TEST_CASE("SCA on sampled near-field scenarios")
    {
        ExperimentConfig config;
        config.g1_users = 10;
        config.g2_users = 3;
        std::mt19937_64 rng(21);
        for (int n = 0; n < 6; ++n)
        {
            const BeamMode mode = n % 2 == 0 ? BeamMode::beamfocusing : BeamMode::zero_forcing;
            const auto scenario = random_miso_scenario(config, 65, mode, 1.0 + n, rng);
            const auto gains = build_effective_gains(scenario);
            const auto oma = solve_miso_oma(gains, scenario.target_rate);
            const auto hyb = solve_miso_hybrid_sca(gains, scenario.m_users(), scenario.target_rate);
            REQUIRE(hyb.feasible());
            CHECK(hybrid_constraint_slack(gains, 10, scenario.target_rate, hyb.p, hyb.e) >= -1e-8);
            if (oma.feasible())
                CHECK(hyb.energy <= oma.energy + 1e-6);
            CHECK(hyb.max_kkt_residual < 1e-6);
        }
    }

    TEST_CASE("zero rate and argument checks")
    {
        const auto gains = three_user_gains();
        const auto zero = solve_miso_hybrid_sca(gains, 10, 0.0);
        CHECK(zero.energy == 0.0);
        CHECK_THROWS_AS(solve_miso_hybrid_sca(gains, 3, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(solve_miso_hybrid_sca(gains, 10, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(solve_miso_oma(gains, std::nan("")), std::invalid_argument);
    }
}
