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

#include "hynoma/miso_nearfield.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hynoma
{

const char *to_string(BeamMode mode)
{
    return mode == BeamMode::beamfocusing ? "beamfocusing" : "zero_forcing";
}

BeamMode beam_mode_from_string(const std::string &name)
{
    if (name == "beamfocusing" || name == "bf")
        return BeamMode::beamfocusing;
    if (name == "zero_forcing" || name == "zf")
        return BeamMode::zero_forcing;
    throw std::invalid_argument("unknown beam mode '" + name + "' (expected beamfocusing or zero_forcing)");
}

double dbm_to_linear(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

void MisoScenario::validate() const
{
    if (k_users() < 1 || m_users() <= k_users())
        throw std::invalid_argument("two-group scenario needs M > K >= 1");
    if (!(p_g1 >= 0.0) || !std::isfinite(p_g1))
        throw std::invalid_argument("legacy transmit power must be finite and non-negative");
    if (!(target_rate >= 0.0) || !std::isfinite(target_rate))
        throw std::invalid_argument("target rate must be finite and non-negative");
    if (!(gain_scale > 0.0) || !std::isfinite(gain_scale))
        throw std::invalid_argument("gain scale must be positive");
    if (geometry.element_positions.size() != geometry.n_antennas || geometry.n_antennas == 0)
        throw std::invalid_argument("geometry is not initialised");
}

namespace
{

Eigen::MatrixXcd stack_channels(const NearFieldGeometry &geometry, const std::vector<UserPosition> &users,
                                double gain_scale)
{
    Eigen::MatrixXcd out(Eigen::Index(geometry.n_antennas), Eigen::Index(users.size()));
    for (std::size_t u = 0; u < users.size(); ++u)
        out.col(Eigen::Index(u)) = spherical_channel(geometry, users[u].cartesian(), gain_scale);
    return out;
}

Eigen::MatrixXcd stack_steering(const NearFieldGeometry &geometry, const std::vector<UserPosition> &users)
{
    Eigen::MatrixXcd out(Eigen::Index(geometry.n_antennas), Eigen::Index(users.size()));
    for (std::size_t u = 0; u < users.size(); ++u)
        out.col(Eigen::Index(u)) = steering_vector(geometry, users[u].cartesian());
    return out;
}

// Columns of H (H^H H)^-1, each scaled to unit norm.
Eigen::MatrixXcd zero_forcing(const Eigen::MatrixXcd &channels, const char *group)
{
    // Rank test on the direction matrix so the threshold does not depend on path loss.
    Eigen::MatrixXcd directions = channels;
    for (Eigen::Index u = 0; u < directions.cols(); ++u)
        directions.col(u).normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(directions);
    const auto &sv = svd.singularValues();
    if (directions.cols() > directions.rows() || sv.minCoeff() <= 1e-10 * sv.maxCoeff())
        throw std::invalid_argument(std::string("zero-forcing: channel matrix of group ") + group +
                                    " is rank deficient");

    Eigen::MatrixXcd w = directions.completeOrthogonalDecomposition().pseudoInverse().adjoint();
    for (Eigen::Index u = 0; u < w.cols(); ++u)
        w.col(u).normalize();
    return w;
}

double projected_gain(const Eigen::MatrixXcd &channels, Eigen::Index user, const Eigen::MatrixXcd &beams,
                      Eigen::Index beam)
{
    return std::norm(channels.col(user).dot(beams.col(beam))); // dot() conjugates the first operand
}

} // namespace

Eigen::MatrixXcd MisoScenario::g1_channels() const
{
    return stack_channels(geometry, g1_positions, gain_scale);
}

Eigen::MatrixXcd MisoScenario::g2_channels() const
{
    return stack_channels(geometry, g2_positions, gain_scale);
}

BeamSet build_beams(const MisoScenario &scenario)
{
    scenario.validate();
    BeamSet beams;
    if (scenario.beam_mode == BeamMode::beamfocusing)
    {
        beams.g1_beams = stack_steering(scenario.geometry, scenario.g1_positions);
        beams.g2_beams = stack_steering(scenario.geometry, scenario.g2_positions);
    }
    else
    {
        beams.g1_beams = zero_forcing(scenario.g1_channels(), "G1");
        beams.g2_beams = zero_forcing(scenario.g2_channels(), "G2");
    }
    return beams;
}

std::size_t select_beam(const MisoScenario &scenario, const BeamSet &beams, std::size_t k)
{
    if (k >= scenario.k_users())
        throw std::out_of_range("G2 user index out of range");

    std::size_t best = 0;
    if (scenario.beam_mode == BeamMode::beamfocusing)
    {
        const double theta = scenario.g2_positions[k].angle;
        double best_gap = std::abs(theta - scenario.g1_positions[0].angle);
        for (std::size_t m = 1; m < scenario.m_users(); ++m)
        {
            const double gap = std::abs(theta - scenario.g1_positions[m].angle);
            if (gap < best_gap)
            {
                best_gap = gap;
                best = m;
            }
        }
    }
    else
    {
        const Eigen::MatrixXcd g = scenario.g2_channels();
        double best_gain = projected_gain(g, Eigen::Index(k), beams.g1_beams, 0);
        for (std::size_t m = 1; m < scenario.m_users(); ++m)
        {
            const double gain = projected_gain(g, Eigen::Index(k), beams.g1_beams, Eigen::Index(m));
            if (gain > best_gain)
            {
                best_gain = gain;
                best = m;
            }
        }
    }
    return best;
}

BeamAssignment assign_beams(const MisoScenario &scenario, const BeamSet &beams)
{
    BeamAssignment out;
    for (std::size_t k = 0; k < scenario.k_users(); ++k)
    {
        const auto beam = select_beam(scenario, beams, k);
        for (auto prev : out.beam_of)
            if (prev == beam)
                out.has_duplicates = true;
        out.beam_of.push_back(beam);
    }
    return out;
}

EffectiveGains effective_gains(const MisoScenario &scenario, const BeamSet &beams, const BeamAssignment &assignment)
{
    scenario.validate();
    const auto k_users = Eigen::Index(scenario.k_users());
    const auto m_users = Eigen::Index(scenario.m_users());
    if (assignment.beam_of.size() != scenario.k_users())
        throw std::invalid_argument("assignment must name one beam per G2 user");
    for (auto beam : assignment.beam_of)
        if (beam >= scenario.m_users())
            throw std::invalid_argument("assigned beam index out of range");

    const Eigen::MatrixXcd h = scenario.g1_channels();
    const Eigen::MatrixXcd g = scenario.g2_channels();
    const auto beam = [&](Eigen::Index k) { return Eigen::Index(assignment.beam_of[std::size_t(k)]); };

    EffectiveGains out;
    out.g.resize(k_users, k_users);
    out.h.resize(k_users, k_users);
    out.c.resize(k_users, k_users);
    out.b.resize(k_users);
    out.d.resize(k_users);
    out.assignment = assignment.beam_of;

    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        for (Eigen::Index j = 0; j < k_users; ++j)
        {
            out.g(k, j) = projected_gain(g, k, beams.g1_beams, beam(j));
            out.h(k, j) = projected_gain(h, beam(k), beams.g1_beams, beam(j));
            out.c(k, j) = projected_gain(g, k, beams.g2_beams, j);
        }
        double g_total = 0.0, h_total = 0.0;
        for (Eigen::Index m = 0; m < m_users; ++m)
        {
            g_total += projected_gain(g, k, beams.g1_beams, m);
            h_total += projected_gain(h, beam(k), beams.g1_beams, m);
        }
        out.b[k] = scenario.p_g1 * g_total + 1.0;
        out.d[k] = scenario.p_g1 * h_total + 1.0;
    }
    return out;
}

EffectiveGains build_effective_gains(const MisoScenario &scenario)
{
    const BeamSet beams = build_beams(scenario);
    return effective_gains(scenario, beams, assign_beams(scenario, beams));
}

std::vector<HybridRates> rates_hybrid(const EffectiveGains &gains, const Eigen::VectorXd &p, const Eigen::VectorXd &e)
{
    const auto k_users = gains.c.rows();
    if (p.size() != k_users || e.size() != k_users)
        throw std::invalid_argument("power vectors must have one entry per G2 user");
    if ((p.array() < 0.0).any() || (e.array() < 0.0).any())
        throw std::invalid_argument("powers must be non-negative");

    std::vector<HybridRates> out(static_cast<std::size_t>(k_users));
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        const double g_interf = gains.g.row(k).dot(p) - gains.g(k, k) * p[k];
        const double h_interf = gains.h.row(k).dot(p) - gains.h(k, k) * p[k];
        const double c_interf = gains.c.row(k).dot(e) - gains.c(k, k) * e[k];

        auto &r = out[std::size_t(k)];
        r.g2_direct = std::log1p(gains.g(k, k) * p[k] / (g_interf + gains.b[k]));
        r.g1_decode = std::log1p(gains.h(k, k) * p[k] / (h_interf + gains.d[k]));
        r.phase2 = std::log1p(gains.c(k, k) * e[k] / (c_interf + 1.0));
        r.phase1 = std::min(r.g2_direct, r.g1_decode);
    }
    return out;
}

} // namespace hynoma
