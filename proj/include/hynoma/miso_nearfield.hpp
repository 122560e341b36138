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

#ifndef HYNOMA_MISO_NEARFIELD_HPP
#define HYNOMA_MISO_NEARFIELD_HPP

#include "hynoma/channel_models.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hynoma
{

enum class BeamMode
{
    beamfocusing,
    zero_forcing
};

const char *to_string(BeamMode mode);
BeamMode beam_mode_from_string(const std::string &name);

/// dBm to linear noise-normalized power.
double dbm_to_linear(double dbm);

// Two-group downlink: G1 (M legacy near-field users, served first via SDMA) and G2 (K users that
// may borrow G1's beams during the first phase under hybrid NOMA).
struct MisoScenario
{
    NearFieldGeometry geometry;
    std::vector<UserPosition> g1_positions;
    std::vector<UserPosition> g2_positions;
    double p_g1 = 10.0;        // linear, noise-normalized
    double target_rate = 1.0;  // nats per channel use
    BeamMode beam_mode = BeamMode::beamfocusing;
    double gain_scale = 1.0;

    std::size_t m_users() const { return g1_positions.size(); }
    std::size_t k_users() const { return g2_positions.size(); }
    void validate() const;

    /// Channel vectors h_m (G1) and g_k (G2) as matrix columns.
    Eigen::MatrixXcd g1_channels() const;
    Eigen::MatrixXcd g2_channels() const;
};

struct BeamSet
{
    Eigen::MatrixXcd g1_beams; // N x M, unit-norm columns
    Eigen::MatrixXcd g2_beams; // N x K, unit-norm columns
};

/// Beamfocusing mode: matched beams b(psi) for both groups. Zero-forcing mode: column-normalized
/// pseudo-inverse of each group's channel matrix. Throws std::invalid_argument naming the group
/// when its channel matrix is rank deficient.
BeamSet build_beams(const MisoScenario &scenario);

/// Index of the G1 beam that G2 user k borrows (closest angle for beamfocusing, largest projected
/// gain for zero-forcing; ties go to the lowest index).
std::size_t select_beam(const MisoScenario &scenario, const BeamSet &beams, std::size_t k);

struct BeamAssignment
{
    std::vector<std::size_t> beam_of; // beam_of[k] = i^k
    bool has_duplicates = false;
};

BeamAssignment assign_beams(const MisoScenario &scenario, const BeamSet &beams);

// Scalar gain tables feeding the power allocation problems.
//   g(k,j) = |g_k^H w^G1_{i^j}|^2        h(k,j) = |h_{i^k}^H w^G1_{i^j}|^2
//   c(k,i) = |g_k^H w^G2_i|^2
//   b_k = P_G1 sum_m |g_k^H w^G1_m|^2 + 1   d_k = P_G1 sum_m |h_{i^k}^H w^G1_m|^2 + 1
struct EffectiveGains
{
    Eigen::MatrixXd g;
    Eigen::MatrixXd h;
    Eigen::MatrixXd c;
    Eigen::VectorXd b;
    Eigen::VectorXd d;
    std::vector<std::size_t> assignment;

    std::size_t k_users() const { return std::size_t(c.rows()); }
};

EffectiveGains effective_gains(const MisoScenario &scenario, const BeamSet &beams, const BeamAssignment &assignment);

/// Convenience: beams, assignment and gains in one call.
EffectiveGains build_effective_gains(const MisoScenario &scenario);

struct HybridRates
{
    double g1_decode = 0.0; // R^G1_{i^k -> k}: the G1 user decoding the borrowed-beam signal
    double g2_direct = 0.0; // R^G2_k: G2 user decoding its own signal in the first phase
    double phase2 = 0.0;    // R^G2_{k,2}: second-phase SDMA rate
    double phase1 = 0.0;    // min(g2_direct, g1_decode)
};

/// Per-user rates for first-phase powers p and second-phase powers e.
std::vector<HybridRates> rates_hybrid(const EffectiveGains &gains, const Eigen::VectorXd &p, const Eigen::VectorXd &e);

} // namespace hynoma

#endif
