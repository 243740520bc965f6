// SPDX-License-Identifier: Apache-2.0
//
// beamsel - beam selection for beamspace mmWave massive MIMO
// Copyright (C) 2026 The beamsel authors
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

#ifndef BEAMSEL_CHANNEL_HPP
#define BEAMSEL_CHANNEL_HPP

#include "beamsel/core.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <utility>

namespace beamsel {

using Rng = std::mt19937_64;

// Physical scenario. Defaults follow the reference simulation setup.
struct ScenarioConfig {
    int n_antennas = 32;
    int n_users = 5;
    double distance = 150.0;                  // D, meters
    double ring_radius = 10.0;                // R, meters
    double sector_origin = 0.0;               // omega_0, radians
    int n_clusters = 3;
    std::pair<int, int> n_rays_range{1, 30};  // per-cluster subpath count, inclusive
    double angle_spread = 5.0 * std::numbers::pi / 180.0;
    double los_gain_db = -3.0;
    double nlos_gain_db = -5.0;
    double noise_variance = 1.0;
    double transmit_power_db = 20.0;          // relative to noise_variance

    [[nodiscard]] double transmit_power() const { return db_to_linear(transmit_power_db); }

    // Width of the LoS AoA support, 2 asin(R/D).
    [[nodiscard]] double los_support_width() const
    {
        return 2.0 * std::asin(ring_radius / distance);
    }

    void validate() const
    {
        if (n_antennas < 1) throw config_error("n_antennas must be positive");
        if (n_users < 1) throw config_error("n_users must be positive");
        if (n_users > n_antennas) throw config_error("n_users must not exceed n_antennas");
        if (distance <= 0.0) throw config_error("distance must be positive");
        if (ring_radius < 0.0) throw config_error("ring_radius must be nonnegative");
        if (ring_radius >= distance) throw config_error("ring_radius must be smaller than distance");
        if (n_clusters < 0) throw config_error("n_clusters must be nonnegative");
        if (n_rays_range.first < 1 || n_rays_range.second < n_rays_range.first)
            throw config_error("n_rays range must satisfy 1 <= lo <= hi");
        if (angle_spread < 0.0) throw config_error("angle_spread must be nonnegative");
        if (noise_variance <= 0.0) throw config_error("noise_variance must be positive");
    }
};

// Centered element positions J(N) = { q - (N+1)/2 : q = 1..N }.
inline RVector element_positions(int n)
{
    RVector m(n);
    for (int q = 0; q < n; ++q)
        m[q] = (q + 1) - (n + 1) / 2.0;
    return m;
}

// Array response for spatial direction theta, unit norm.
inline CVector steering_vector(double theta, int n)
{
    if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
    const RVector m = element_positions(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVector a(n);
    for (int q = 0; q < n; ++q)
        a[q] = scale * std::polar(1.0, -2.0 * std::numbers::pi * theta * m[q]);
    return a;
}

// Pre-defined beam direction of (0-based) beam n: (n + 1 - (N+1)/2) / N.
inline double beam_direction(int n, int n_antennas)
{
    return ((n + 1) - (n_antennas + 1) / 2.0) / n_antennas;
}

// Spatial Fourier matrix of the lens array; column n is the steering vector
// of beam n, columns in ascending direction.
inline CMatrix dla_transform(int n)
{
    if (n < 1) throw std::invalid_argument("dla_transform: n must be >= 1");
    CMatrix u(n, n);
    for (int col = 0; col < n; ++col)
        u.col(col) = steering_vector(beam_direction(col, n), n);
    return u;
}

// Half-wavelength spacing: phi = sin(omega) / 2.
inline double spatial_direction(double aoa) { return 0.5 * std::sin(aoa); }

struct ClusterAngles {
    double mean_aoa = 0.0;
    std::vector<double> subpath_aoas;
};

struct UserAngles {
    double los_aoa = 0.0;
    std::vector<ClusterAngles> clusters;
};

namespace detail {

// Draws one user's angles; advances rng by a fixed pattern per cluster so
// user k's draws never depend on how many users follow.
inline UserAngles draw_one_user(const ScenarioConfig &cfg, Rng &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> rays(cfg.n_rays_range.first, cfg.n_rays_range.second);
    constexpr double half_pi = std::numbers::pi / 2.0;

    UserAngles u;
    u.los_aoa = cfg.sector_origin + cfg.los_support_width() * unit(rng);
    u.clusters.resize(static_cast<std::size_t>(cfg.n_clusters));
    for (auto &c : u.clusters) {
        c.mean_aoa = -half_pi + std::numbers::pi * unit(rng);
        const int n_rays = rays(rng);
        c.subpath_aoas.resize(static_cast<std::size_t>(n_rays));
        for (auto &aoa : c.subpath_aoas)
            aoa = c.mean_aoa + cfg.angle_spread * (unit(rng) - 0.5);
    }
    return u;
}

inline cplx draw_gain(double gain_db, Rng &rng)
{
    // CN(0, v): each quadrature N(0, v/2).
    std::normal_distribution<double> normal(0.0, std::sqrt(db_to_linear(gain_db) / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace detail

// Per-user AoA bundle (LoS, cluster means, subpath AoAs).
inline std::vector<UserAngles> draw_user_angles(const ScenarioConfig &cfg, Rng &rng)
{
    if (cfg.ring_radius >= cfg.distance)
        throw config_error("ring_radius must be smaller than distance");
    cfg.validate();
    std::vector<UserAngles> out;
    out.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int k = 0; k < cfg.n_users; ++k)
        out.push_back(detail::draw_one_user(cfg, rng));
    return out;
}

struct BeamspaceChannel {
    CMatrix h_bar;      // N x K, U^H H
    CMatrix transform;  // N x N, U
    CMatrix h_antenna;  // N x K, H

    [[nodiscard]] int n_antennas() const { return static_cast<int>(h_bar.rows()); }
    [[nodiscard]] int n_users() const { return static_cast<int>(h_bar.cols()); }
};

inline BeamspaceChannel make_beamspace(CMatrix h_antenna)
{
    BeamspaceChannel ch;
    ch.transform = dla_transform(static_cast<int>(h_antenna.rows()));
    ch.h_bar = ch.transform.adjoint() * h_antenna;
    ch.h_antenna = std::move(h_antenna);
    return ch;
}

// Keep the first k users of a channel.
inline BeamspaceChannel first_users(const BeamspaceChannel &ch, int k)
{
    if (k < 1 || k > ch.n_users()) throw std::invalid_argument("first_users: bad user count");
    BeamspaceChannel out;
    out.transform = ch.transform;
    out.h_bar = ch.h_bar.leftCols(k);
    out.h_antenna = ch.h_antenna.leftCols(k);
    return out;
}

// Antenna-domain channel from explicit angles; gains drawn per path.
inline CMatrix antenna_channel(const ScenarioConfig &cfg, const std::vector<UserAngles> &angles,
                               Rng &rng)
{
    const int n = cfg.n_antennas;
    CMatrix h = CMatrix::Zero(n, static_cast<Eigen::Index>(angles.size()));
    for (std::size_t k = 0; k < angles.size(); ++k) {
        auto col = h.col(static_cast<Eigen::Index>(k));
        col += detail::draw_gain(cfg.los_gain_db, rng) *
               steering_vector(spatial_direction(angles[k].los_aoa), n);
        for (const auto &c : angles[k].clusters)
            for (double aoa : c.subpath_aoas)
                col += detail::draw_gain(cfg.nlos_gain_db, rng) *
                       steering_vector(spatial_direction(aoa), n);
    }
    return h;
}

// Full synthesis: angles for all users first, then the path gains.
inline BeamspaceChannel generate_channel(const ScenarioConfig &cfg, Rng &rng)
{
    const auto angles = draw_user_angles(cfg, rng);
    return make_beamspace(antenna_channel(cfg, angles, rng));
}

// Debug dump: rows are beams, columns users, cells "re+imi".
inline void write_channel_csv(std::ostream &os, const CMatrix &h_bar)
{
    for (Eigen::Index r = 0; r < h_bar.rows(); ++r) {
        for (Eigen::Index c = 0; c < h_bar.cols(); ++c) {
            const cplx v = h_bar(r, c);
            if (c) os << ',';
            os << fmt::format("{:.17g}{:+.17g}i", v.real(), v.imag());
        }
        os << '\n';
    }
}

} // namespace beamsel

#endif
