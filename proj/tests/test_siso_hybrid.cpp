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
#include "hynoma/siso_hybrid.hpp"
#include "hynoma/verify_suites.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace hynoma;

namespace
{

// Two users, exact: P11 = (e^R - 1)/g1, and user 2 water-fills over levels P11 + 1/g2 and 1/g2.
struct TwoUser
{
    double p11, p21, p22;
};

TwoUser two_user_reference(double g1, double g2, double rate)
{
    const double p11 = std::expm1(rate) / g1;
    const double a1 = p11 + 1.0 / g2, a2 = 1.0 / g2;
    const double level = std::sqrt(std::exp(rate) * a1 * a2);
    if (level > a1)
        return {p11, level - a1, level - a2};
    return {p11, 0.0, std::expm1(rate) / g2};
}

// Reference schedule for ordered gains by bisection on the water level of each user in turn.
Eigen::MatrixXd bisection_schedule(const std::vector<double> &gains, double rate)
{
    const std::size_t m_users = gains.size();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(Eigen::Index(m_users), Eigen::Index(m_users));
    for (std::size_t m = 0; m < m_users; ++m)
    {
        std::vector<double> level(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
        {
            double interference = 0.0;
            for (std::size_t j = i; j < m; ++j)
                interference += p(Eigen::Index(j), Eigen::Index(i));
            level[i] = interference + 1.0 / gains[m]; // ordered: the weakest decoder is user m
        }
        const auto rate_at = [&](double lambda) {
            double r = 0.0;
            for (double a : level)
                r += std::log(std::max(lambda, a) / a);
            return r;
        };
        double lo = *std::min_element(level.begin(), level.end()), hi = lo;
        while (rate_at(hi) < rate)
            hi *= 2.0;
        for (int it = 0; it < 300; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (rate_at(mid) < rate ? lo : hi) = mid;
        }
        for (std::size_t i = 0; i <= m; ++i)
            p(Eigen::Index(m), Eigen::Index(i)) = std::max(0.0, hi - level[i]);
    }
    return p;
}

double direct_rate(const std::vector<double> &g, const Eigen::MatrixXd &p, std::size_t m, std::size_t i)
{
    double interference = 0.0;
    for (std::size_t j = i; j < m; ++j)
        interference += p(Eigen::Index(j), Eigen::Index(i));
    double r = INFINITY;
    for (std::size_t k = i; k <= m; ++k)
        r = std::min(r, std::log(1.0 + g[k] * p(Eigen::Index(m), Eigen::Index(i)) / (g[k] * interference + 1.0)));
    return r;
}

} // namespace

TEST_SUITE("siso_hybrid")
{
    TEST_CASE("per-slot rate of a superposed signal")
    {
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
        p(0, 0) = 3.19454;
        p(1, 0) = 1.37264;
        const std::vector<double> g = {1.0, 1.0};
        CHECK(decode_rate(g, p, 1, 0, 1) == doctest::Approx(std::log(1.0 + 1.37264 / 4.19454)).epsilon(1e-12));
        CHECK(decode_rate(g, p, 1, 0, 1) == doctest::Approx(0.28323).epsilon(1e-4));

        const std::vector<double> g2 = {3.0, 0.5};
        CHECK(effective_rate(g2, p, 1, 0) == doctest::Approx(direct_rate(g2, p, 1, 0)).epsilon(1e-14));
    }

    TEST_CASE("effective gain table")
    {
        const std::vector<double> g = {2.0, 5.0, 1.0};
        const auto t = effective_min_gains(g);
        CHECK(t(1, 0) == 2.0);
        CHECK(t(1, 1) == 5.0);
        CHECK(t(2, 1) == 1.0);
        CHECK(t(0, 2) == 0.0);
    }

    TEST_CASE("OMA schedule is diagonal")
    {
        const auto s = SisoScenario::make({2.0, 1.0}, 2.0);
        const auto oma = oma_allocation(s);
        CHECK(oma.power(0, 0) == doctest::Approx(std::expm1(2.0) / 2.0).epsilon(1e-14));
        CHECK(oma.power(1, 1) == doctest::Approx(std::expm1(2.0)).epsilon(1e-14));
        CHECK(oma.power(1, 0) == 0.0);
        CHECK(oma.power(0, 0) == doctest::Approx(3.19454).epsilon(1e-5));
        CHECK(oma.power(1, 1) == doctest::Approx(6.38906).epsilon(1e-5));
    }

    TEST_CASE("two-user closed form")
    {
        const auto s = SisoScenario::make({2.0, 1.0}, 2.0);
        const auto h = hybrid_closed_form(s);
        const auto ref = two_user_reference(2.0, 1.0, 2.0);
        CHECK(h.power(0, 0) == doctest::Approx(ref.p11).epsilon(1e-12));
        CHECK(h.power(1, 0) == doctest::Approx(ref.p21).epsilon(1e-12));
        CHECK(h.power(1, 1) == doctest::Approx(ref.p22).epsilon(1e-12));

        CHECK(std::abs(h.power(0, 0) - 3.19454) < 1e-4);
        CHECK(std::abs(h.power(1, 0) - 1.37264) < 1e-4);
        CHECK(std::abs(h.power(1, 1) - 4.56718) < 1e-4);
        CHECK(std::abs(h.per_user_energy()[1] - 5.93982) < 1e-4);
        CHECK(h.per_user_energy()[1] < oma_allocation(s).per_user_energy()[1]);

        // Both slots carry the same accumulated interference.
        CHECK(std::abs(h.power(0, 0) + h.power(1, 0) - h.power(1, 1)) < 1e-9);
    }

    TEST_CASE("energy reports")
    {
        const auto s = SisoScenario::make({2.0, 1.0}, 2.0);
        const auto oma = energy_report(oma_allocation(s));
        const auto hyb = energy_report(hybrid_closed_form(s));
        const auto ref = two_user_reference(2.0, 1.0, 2.0);
        CHECK(oma.total == doctest::Approx(std::expm1(2.0) * 1.5).epsilon(1e-14));
        CHECK(hyb.total == doctest::Approx(ref.p11 + ref.p21 + ref.p22).epsilon(1e-12));
        CHECK(std::abs(oma.total - 9.58360) < 1e-4);
        CHECK(std::abs(hyb.total - 9.13436) < 1e-4);

        const auto half = energy_report(hybrid_closed_form(SisoScenario::make({2.0, 1.0}, 2.0, 0.5)));
        CHECK(half.total == doctest::Approx(0.5 * hyb.total));
    }

    TEST_CASE("closed form agrees with bisection water-filling")
    {
        std::mt19937_64 rng(11);
        for (int n = 0; n < 200; ++n)
        {
            const auto s = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
            const auto h = hybrid_closed_form(s);
            const auto ref = bisection_schedule(s.gains, s.target_rate);
            const double scale = std::max(1.0, ref.maxCoeff());
            CHECK((h.powers() - ref).cwiseAbs().maxCoeff() / scale < 1e-9);
        }
    }

    TEST_CASE("closed form properties on ordered scenarios")
    {
        std::mt19937_64 rng(5);
        for (int n = 0; n < 300; ++n)
        {
            const auto s = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
            const auto h = hybrid_closed_form(s);
            const auto oma = oma_allocation(s);
            CHECK(h.total_energy() < oma.total_energy());
            for (std::size_t m = 0; m < s.n_users(); ++m)
            {
                double rate = 0.0;
                for (std::size_t i = 0; i <= m; ++i)
                {
                    CHECK(h.power(m, i) > 0.0);
                    rate += direct_rate(s.gains, h.powers(), m, i);
                    const double a = h.accumulated_interference(m, i), b = h.accumulated_interference(m, m);
                    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, b));
                }
                CHECK(rate == doctest::Approx(s.target_rate).epsilon(1e-10));
                for (std::size_t i = 1; i < m; ++i)
                    CHECK(std::abs(h.power(m, i) - h.power(m, 0)) <= 1e-9 * std::max(1.0, h.power(m, 0)));
            }
        }
    }

    TEST_CASE("closed form rejects unordered gains")
    {
        CHECK_THROWS_AS(hybrid_closed_form(SisoScenario::make({1.0, 2.0}, 1.0)), std::invalid_argument);
    }

    TEST_CASE("zero rate gives an empty schedule")
    {
        const auto h = hybrid_closed_form(SisoScenario::make({3.0, 2.0, 1.0}, 0.0));
        CHECK(h.powers().cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("water-filling over explicit levels")
    {
        // Levels 1/g_i + I_i = 1 and 3, rate log 4: both active needs lambda^2 = 4 * 1 * 3 > 3^2.
        const std::vector<double> interference = {0.0, 2.0};
        const std::vector<double> gains = {1.0, 1.0};
        const auto p = waterfill_user(interference, gains, std::log(4.0));
        REQUIRE(p.size() == 2);
        CHECK(p[0] == doctest::Approx(std::sqrt(12.0) - 1.0));
        CHECK(p[1] == doctest::Approx(std::sqrt(12.0) - 3.0));

        // Rate log 2: lambda = 2 < 3, so only the first slot is used.
        const auto q = waterfill_user(interference, gains, std::log(2.0));
        CHECK(q[0] == doctest::Approx(1.0));
        CHECK(q[1] == 0.0);
    }

    TEST_CASE("successive allocation equals the closed form on ordered gains")
    {
        const auto s = SisoScenario::make({2.0, 1.0}, 2.0);
        CHECK((successive_allocation(s).powers() - hybrid_closed_form(s).powers()).cwiseAbs().maxCoeff() < 1e-12);

        std::mt19937_64 rng(9);
        for (int n = 0; n < 200; ++n)
        {
            const auto r = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
            const Eigen::MatrixXd diff = (successive_allocation(r).powers() - hybrid_closed_form(r).powers()).cwiseAbs();
            CHECK(diff.maxCoeff() < 1e-9);
        }
    }

    TEST_CASE("unordered pair checked against the grid oracle")
    {
        // U2 is the stronger user, so its slot-1 decoding is limited by U1's gain of 1.
        const auto s = SisoScenario::make({1.0, 2.0}, 2.0);
        const auto alloc = successive_allocation(s);
        CHECK(alloc.power(0, 0) == doctest::Approx(std::expm1(2.0)));
        const auto oracle = grid_search_siso_refined(s, 1, alloc.powers());
        CHECK(alloc.per_user_energy()[1] <= oracle.energy * (1.0 + 1e-6));
        CHECK(alloc.per_user_energy()[1] >= oracle.energy * (1.0 - 1e-3));
        CHECK(alloc.per_user_energy()[1] <= std::expm1(2.0) / 2.0 + 1e-12);
    }

    TEST_CASE("unordered schedules never cost more than OMA per user")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> rate(0.5, 6.0);
        for (int n = 0; n < 300; ++n)
        {
            std::vector<double> g = sample_rayleigh_gains(2 + n % 5, 0.01, rng());
            const auto s = SisoScenario::make(g, rate(rng));
            const auto alloc = successive_allocation(s);
            const auto oma = oma_allocation(s);
            for (std::size_t m = 0; m < s.n_users(); ++m)
            {
                CHECK(alloc.per_user_energy()[m] <= oma.per_user_energy()[m] * (1.0 + 1e-12));
                double r = 0.0;
                for (std::size_t i = 0; i <= m; ++i)
                    r += direct_rate(s.gains, alloc.powers(), m, i);
                CHECK(r >= s.target_rate - 1e-9);
            }
        }
    }

    TEST_CASE("uplink contrast keeps the second user out of the first slot")
    {
        const auto [p21, p22] = uplink_two_user(2.0, 1.0, 2.0);
        CHECK(std::abs(p21) < 1e-9);
        CHECK(p22 == doctest::Approx(std::expm1(2.0)).epsilon(1e-12));
        CHECK(std::abs(p22 - 6.38906) < 1e-4);

        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(0.01, 10.0), r(0.1, 6.0);
        for (int n = 0; n < 1000; ++n)
        {
            double g1 = u(rng), g2 = u(rng);
            if (g1 < g2)
                std::swap(g1, g2);
            if (g1 == g2)
                continue;
            const double rate = r(rng);
            const auto [a, b] = uplink_two_user(g1, g2, rate);
            CHECK(std::abs(a) < 1e-9);
            CHECK(b == doctest::Approx(std::expm1(rate) / g2).epsilon(1e-9));
        }
        CHECK_THROWS_AS(uplink_two_user(1.0, 2.0, 1.0), std::invalid_argument);
    }
}
