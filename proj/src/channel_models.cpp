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

#include "hynoma/channel_models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace hynoma
{

bool is_strictly_decreasing(const std::vector<double> &gains, double margin)
{
    for (std::size_t m = 1; m < gains.size(); ++m)
        if (!(gains[m - 1] > gains[m] + margin))
            return false;
    return true;
}

void SisoScenario::validate() const
{
    if (gains.empty())
        throw std::invalid_argument("scenario needs at least one user");
    for (std::size_t m = 0; m < gains.size(); ++m)
        if (!std::isfinite(gains[m]) || gains[m] <= 0.0)
            throw std::invalid_argument("channel gain of user " + std::to_string(m + 1) + " must be positive and finite");
    if (ordered && !is_strictly_decreasing(gains))
        throw std::invalid_argument("ordered flag set but gains are not strictly decreasing");
    if (!std::isfinite(target_rate) || target_rate < 0.0)
        throw std::invalid_argument("target rate must be finite and non-negative");
    if (!std::isfinite(slot_duration) || slot_duration <= 0.0)
        throw std::invalid_argument("slot duration must be positive");
}

SisoScenario SisoScenario::make(std::vector<double> gains, double target_rate, double slot_duration)
{
    SisoScenario s;
    s.gains = std::move(gains);
    s.target_rate = target_rate;
    s.slot_duration = slot_duration;
    s.ordered = false;
    s.validate();
    s.ordered = is_strictly_decreasing(s.gains);
    return s;
}

std::vector<double> sample_rayleigh_gains(std::size_t m_users, double gain_floor, std::uint64_t seed)
{
    if (!(gain_floor >= 0.0) || !std::isfinite(gain_floor))
        throw std::invalid_argument("gain floor must be finite and non-negative");

    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> component(0.0, std::sqrt(0.5));

    std::vector<double> gains(m_users);
    for (auto &g : gains)
    {
        do
        {
            const double re = component(rng), im = component(rng);
            g = re * re + im * im;
        } while (g < gain_floor);
    }
    return gains;
}

NearFieldGeometry NearFieldGeometry::ula(std::size_t n_antennas, double wavelength, double element_spacing)
{
    if (n_antennas == 0)
        throw std::invalid_argument("array needs at least one antenna");
    if (!(wavelength > 0.0) || !(element_spacing > 0.0))
        throw std::invalid_argument("wavelength and element spacing must be positive");

    NearFieldGeometry g;
    g.n_antennas = n_antennas;
    g.wavelength = wavelength;
    g.element_spacing = element_spacing;
    g.element_positions.reserve(n_antennas);
    const double centre = 0.5 * static_cast<double>(n_antennas - 1);
    for (std::size_t n = 0; n < n_antennas; ++n)
        g.element_positions.emplace_back((static_cast<double>(n) - centre) * element_spacing, 0.0);
    return g;
}

NearFieldGeometry NearFieldGeometry::ula(std::size_t n_antennas, double wavelength)
{
    return ula(n_antennas, wavelength, 0.5 * wavelength);
}

NearFieldGeometry NearFieldGeometry::ula_at_frequency(std::size_t n_antennas, double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    return ula(n_antennas, speed_of_light / carrier_hz);
}

double NearFieldGeometry::rayleigh_distance() const
{
    const double d = aperture();
    return 2.0 * d * d / wavelength;
}

UserPosition::UserPosition(double angle_rad, double range_m) : angle(angle_rad), range(range_m)
{
    if (!(std::abs(angle) < 0.5 * std::numbers::pi))
        throw std::invalid_argument("user angle must lie strictly inside (-pi/2, pi/2)");
    if (!(range > 0.0) || !std::isfinite(range))
        throw std::invalid_argument("user range must be positive");
}

Point2 UserPosition::cartesian() const
{
    return {range * std::sin(angle), range * std::cos(angle)};
}

ChannelVector steering_vector(const NearFieldGeometry &geometry, const Point2 &point)
{
    const auto n = geometry.element_positions.size();
    if (n == 0)
        throw std::invalid_argument("geometry has no elements");

    const double k0 = 2.0 * std::numbers::pi / geometry.wavelength;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    ChannelVector b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
        const double dist = (point - geometry.element_positions[i]).norm();
        if (dist <= 1e-12 * geometry.wavelength)
            throw std::domain_error("point coincides with array element " + std::to_string(i));
        b[static_cast<Eigen::Index>(i)] = norm * std::polar(1.0, -k0 * dist);
    }
    return b;
}

double path_amplitude(const NearFieldGeometry &geometry, const Point2 &point)
{
    const double r = (point - geometry.array_center).norm();
    if (!(r > 0.0))
        throw std::domain_error("point at the array centre has no defined path gain");
    return geometry.wavelength / (4.0 * std::numbers::pi * r);
}

ChannelVector spherical_channel(const NearFieldGeometry &geometry, const Point2 &point, double gain_scale)
{
    if (!(gain_scale > 0.0))
        throw std::invalid_argument("gain scale must be positive");
    const double alpha = path_amplitude(geometry, point);
    const double amp = std::sqrt(gain_scale * static_cast<double>(geometry.n_antennas)) * alpha;
    return amp * steering_vector(geometry, point);
}

} // namespace hynoma
