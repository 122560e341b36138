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

#ifndef HYNOMA_CHANNEL_MODELS_HPP
#define HYNOMA_CHANNEL_MODELS_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace hynoma
{

/// Speed of light in vacuum [m/s].
inline constexpr double speed_of_light = 299792458.0;

using Point2 = Eigen::Vector2d;
using ChannelVector = Eigen::VectorXcd;

/// Returns true if `gains` is strictly decreasing with the given margin between neighbours.
bool is_strictly_decreasing(const std::vector<double> &gains, double margin = 1e-12);

// Single-antenna downlink scenario. Gains are noise-normalized channel power gains |h_m|^2,
// listed in SIC/scheduling order (user 0 is served in slot 0, user M-1 in slot M-1).
struct SisoScenario
{
    std::vector<double> gains;
    double target_rate = 1.0;   // nats per channel use
    double slot_duration = 1.0; // seconds
    bool ordered = false;       // asserts gains[0] > gains[1] > ... (strictly)

    std::size_t n_users() const { return gains.size(); }

    /// Throws std::invalid_argument when an invariant is violated.
    /// A target rate of zero is accepted and yields all-zero schedules downstream.
    void validate() const;

    /// Builds a validated scenario and sets `ordered` when the gains are strictly decreasing.
    static SisoScenario make(std::vector<double> gains, double target_rate, double slot_duration = 1.0);
};

// Draws |h|^2 for h ~ CN(0,1), redrawing any sample below `gain_floor`.
// The sequence is a pure function of `seed`.
std::vector<double> sample_rayleigh_gains(std::size_t m_users, double gain_floor, std::uint64_t seed);

// Uniform linear array on the x-axis, centred at the origin; users live in the upper half-plane.
struct NearFieldGeometry
{
    std::size_t n_antennas = 1;
    double wavelength = speed_of_light / 28e9;
    double element_spacing = 0.5 * (speed_of_light / 28e9);
    std::vector<Point2> element_positions;
    Point2 array_center = Point2::Zero();

    /// Element n (0-based) sits at ((n - (N-1)/2) * spacing, 0).
    static NearFieldGeometry ula(std::size_t n_antennas, double wavelength, double element_spacing);
    static NearFieldGeometry ula(std::size_t n_antennas, double wavelength);
    static NearFieldGeometry ula_at_frequency(std::size_t n_antennas, double carrier_hz);

    double aperture() const { return static_cast<double>(n_antennas - 1) * element_spacing; }
    double rayleigh_distance() const;
};

// Polar position relative to the array centre; angle is measured from broadside (the +y axis).
struct UserPosition
{
    double angle = 0.0; // radians, |angle| < pi/2
    double range = 1.0; // meters

    UserPosition() = default;
    UserPosition(double angle_rad, double range_m);

    Point2 cartesian() const;
};

/// Unit-norm spherical-wave steering vector: entry n is exp(-j 2 pi |p - p_n| / lambda) / sqrt(N).
/// Throws std::domain_error if `point` coincides with an array element.
ChannelVector steering_vector(const NearFieldGeometry &geometry, const Point2 &point);

/// Free-space path amplitude lambda / (4 pi |p - p_0|).
double path_amplitude(const NearFieldGeometry &geometry, const Point2 &point);

/// h = sqrt(gain_scale) * sqrt(N) * alpha * b(p). `gain_scale` folds in the link-budget normalization.
ChannelVector spherical_channel(const NearFieldGeometry &geometry, const Point2 &point, double gain_scale = 1.0);

} // namespace hynoma

#endif
