// SPDX-License-Identifier: Apache-2.0
//
// bdce: cascaded channel estimation for group-connected BD-RIS mmWave uplinks
// Copyright (C) 2026 the bdce authors
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

#include "bdce/channel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bdce
{

namespace
{

double path_loss_bs(const SystemConfig &c) { return 1e-3 * std::pow(c.bs_ris_distance, -2.2); }
double path_loss_user(double distance) { return 1e-3 * std::pow(distance, -2.8); }

void require_finalized(const SystemConfig &c)
{
    if (c.dict_v == 0 || c.pilot_lengths.empty())
        throw std::invalid_argument("SystemConfig: finalize() must run before the configuration is used");
}

} // namespace

void finalize(SystemConfig &config)
{
    validate(config.bs_shape);
    validate(config.ris);
    if (config.user_count < 1)
        throw std::invalid_argument("SystemConfig: at least one user is required");
    if (config.bs_ris_paths < 1)
        throw std::invalid_argument("SystemConfig: at least one BS-side path is required");
    if (!(config.transmit_power > 0.0))
        throw std::invalid_argument("SystemConfig: transmit power must be positive");
    if (!(config.bs_ris_distance > 0.0) || !(config.ris_user_distance > 0.0))
        throw std::invalid_argument("SystemConfig: distances must be positive");
    if (config.user_sphere_radius < 0.0 || config.user_sphere_radius >= config.ris_user_distance)
        throw std::invalid_argument("SystemConfig: user sphere radius must lie in [0, nominal distance)");

    if (config.user_ris_paths.empty())
        config.user_ris_paths.assign(config.user_count, 3);
    if (static_cast<int>(config.user_ris_paths.size()) != config.user_count)
        throw std::invalid_argument("SystemConfig: one user-side path count per user is required");
    for (int j : config.user_ris_paths)
        if (j < 1)
            throw std::invalid_argument("SystemConfig: user-side path counts must be positive");

    if (config.pilot_lengths.empty())
    {
        config.pilot_lengths.assign(config.user_count, 24);
        config.pilot_lengths[0] = 48;
    }
    if (static_cast<int>(config.pilot_lengths.size()) != config.user_count)
        throw std::invalid_argument("SystemConfig: one pilot length per user is required");
    for (int t : config.pilot_lengths)
        if (t < 1)
            throw std::invalid_argument("SystemConfig: pilot lengths must be positive");

    int mv = config.ris.shape.vertical, mh = config.ris.shape.horizontal;
    if (config.dict_v == 0)
        config.dict_v = 2 * mv;
    if (config.dict_h == 0)
        config.dict_h = 2 * mh;
    if (config.macro_grid_v == 0)
        config.macro_grid_v = 2 * mv;
    if (config.macro_grid_h == 0)
        config.macro_grid_h = 2 * mh;
    if (config.intra_grid_v == 0)
        config.intra_grid_v = 2 * mv;
    if (config.intra_grid_h == 0)
        config.intra_grid_h = 2 * mh;
    if (config.delta_grid_v == 0)
        config.delta_grid_v = 8 * mv;
    if (config.delta_grid_h == 0)
        config.delta_grid_h = 8 * mh;
    if (config.dict_v < mv || config.dict_h < mh || config.macro_grid_v < mv || config.macro_grid_h < mh ||
        config.intra_grid_v < mv || config.intra_grid_h < mh)
        throw std::invalid_argument("SystemConfig: angle grids must not undersample the surface");
    if (config.rotation_grid_1 < 1 || config.rotation_grid_2 < 1 || config.delta_grid_v < 1 ||
        config.delta_grid_h < 1)
        throw std::invalid_argument("SystemConfig: search grids must be positive");

    if (config.on_grid && (config.bs_shape.spacing != 0.5 || config.ris.shape.spacing != 0.5))
        throw std::invalid_argument("SystemConfig: on-grid mode requires half-wavelength spacing");

    if (std::isnan(config.noise_variance))
        config.noise_variance = noise_variance_for_snr(config, config.snr_db);
    if (config.noise_variance < 0.0)
        throw std::invalid_argument("SystemConfig: noise variance must be non-negative");
    else
        config.snr_db = config.noise_variance > 0.0 ? snr_db_for_noise(config, config.noise_variance)
                                                    : std::numeric_limits<double>::infinity();
}

double noise_variance_for_snr(const SystemConfig &config, double snr_db)
{
    double loss = 1e-6 * std::pow(config.bs_ris_distance, -2.2) * std::pow(config.ris_user_distance, -2.8);
    return loss * config.transmit_power / std::pow(10.0, snr_db / 10.0);
}

double snr_db_for_noise(const SystemConfig &config, double noise_variance)
{
    double loss = 1e-6 * std::pow(config.bs_ris_distance, -2.2) * std::pow(config.ris_user_distance, -2.8);
    return 10.0 * std::log10(loss * config.transmit_power / noise_variance);
}

int ChannelRealization::typical_user() const
{
    return static_cast<int>(std::min_element(user_distance.begin(), user_distance.end()) - user_distance.begin());
}

namespace
{

SpatialFrequencyPair draw_continuous_pair(double spacing, Rng &rng)
{
    return {rng.uniform(-spacing, spacing), rng.uniform(-spacing, spacing)};
}

// Distinct on-grid pair draws; `used` carries the occupied grid cells.
SpatialFrequencyPair draw_grid_pair(int grid_v, int grid_h, bool dft_style, double spacing,
                                    std::set<std::pair<int, int>> &used, Rng &rng)
{
    if (used.size() >= static_cast<std::size_t>(grid_v) * grid_h)
        throw std::invalid_argument("sample_realization: more paths than grid cells in on-grid mode");
    for (;;)
    {
        int a = static_cast<int>(rng.uniform_index(grid_v));
        int b = static_cast<int>(rng.uniform_index(grid_h));
        if (!used.insert({a, b}).second)
            continue;
        if (dft_style)
            return {wrap_frequency(static_cast<double>(a) / grid_v), wrap_frequency(static_cast<double>(b) / grid_h)};
        return {(-1.0 + 2.0 * a / grid_v) * spacing, (-1.0 + 2.0 * b / grid_h) * spacing};
    }
}

double draw_user_distance(const SystemConfig &c, Rng &rng)
{
    double gx = rng.gaussian(), gy = rng.gaussian(), gz = rng.gaussian();
    double n = std::sqrt(gx * gx + gy * gy + gz * gz);
    if (n == 0.0)
    {
        gx = 1.0;
        n = 1.0;
    }
    double radius = c.user_sphere_radius * std::cbrt(rng.uniform());
    double x = c.ris_user_distance + radius * gx / n;
    double y = radius * gy / n;
    double z = radius * gz / n;
    return std::sqrt(x * x + y * y + z * z);
}

} // namespace

ChannelRealization sample_realization(const SystemConfig &config, Rng &rng)
{
    require_finalized(config);
    const int L = config.bs_ris_paths;
    const int K = config.user_count;

    ChannelRealization real;
    real.bs_aoa.resize(L);
    real.ris_aod.resize(L);
    real.path_gains.set_size(L);
    real.user_aoa.resize(K);
    real.user_gains.resize(K);
    real.user_distance.resize(K);
    real.user_steering.resize(K);

    std::set<std::pair<int, int>> used_bs, used_aod;
    for (int l = 0; l < L; ++l)
        real.bs_aoa[l] = config.on_grid ? draw_grid_pair(config.bs_shape.vertical, config.bs_shape.horizontal, true,
                                                         config.bs_shape.spacing, used_bs, rng)
                                        : draw_continuous_pair(config.bs_shape.spacing, rng);
    for (int l = 0; l < L; ++l)
        real.ris_aod[l] = config.on_grid ? draw_grid_pair(config.dict_v, config.dict_h, false,
                                                          config.ris.shape.spacing, used_aod, rng)
                                         : draw_continuous_pair(config.ris.shape.spacing, rng);

    double var_bs = path_loss_bs(config);
    for (int l = 0; l < L; ++l)
        real.path_gains[l] = rng.complex_gaussian(var_bs);

    for (int k = 0; k < K; ++k)
    {
        real.user_distance[k] = draw_user_distance(config, rng);
        int J = config.user_ris_paths[k];
        real.user_aoa[k].resize(J);
        std::set<std::pair<int, int>> used;
        for (int j = 0; j < J; ++j)
            real.user_aoa[k][j] = config.on_grid ? draw_grid_pair(config.dict_v, config.dict_h, false,
                                                                  config.ris.shape.spacing, used, rng)
                                                 : draw_continuous_pair(config.ris.shape.spacing, rng);
        double var_user = path_loss_user(real.user_distance[k]);
        real.user_gains[k].set_size(J);
        for (int j = 0; j < J; ++j)
            real.user_gains[k][j] = rng.complex_gaussian(var_user);
    }

    // The typical user (nearest the surface) always sits at index 0.
    int nearest = real.typical_user();
    if (nearest != 0)
    {
        std::swap(real.user_distance[0], real.user_distance[nearest]);
        std::swap(real.user_aoa[0], real.user_aoa[nearest]);
        std::swap(real.user_gains[0], real.user_gains[nearest]);
    }

    int n = config.bs_shape.count(), m = config.ris.element_count();
    real.bs_steering.set_size(n, L);
    real.aod_steering.set_size(m, L);
    for (int l = 0; l < L; ++l)
    {
        real.bs_steering.col(l) = upa_response(config.bs_shape, real.bs_aoa[l]);
        real.aod_steering.col(l) = rearranged_upa_response(config.ris, real.ris_aod[l]);
    }
    for (int k = 0; k < K; ++k)
    {
        // Path counts follow the realization, not the config: the nearest-user
        // relabeling above may have moved a user with a different count here.
        int J = static_cast<int>(real.user_aoa[k].size());
        real.user_steering[k].set_size(m, J);
        for (int j = 0; j < J; ++j)
            real.user_steering[k].col(j) = rearranged_upa_response(config.ris, real.user_aoa[k][j]);
    }
    real.bs_ris_channel = real.bs_steering * arma::diagmat(real.path_gains) * real.aod_steering.t();
    return real;
}

arma::cx_vec cascaded_direct(const ChannelRealization &real, const ScatteringMatrix &scattering, int user)
{
    const GroupLayout &layout = scattering.layout;
    int mb = layout.group_size();
    arma::cx_vec h = real.user_channel(user);
    arma::cx_vec out(real.bs_ris_channel.n_rows, arma::fill::zeros);
    for (int g = 0; g < layout.group_count; ++g)
    {
        arma::uword lo = static_cast<arma::uword>(g) * mb, hi = lo + mb - 1;
        out += real.bs_ris_channel.cols(lo, hi) * scattering.blocks[g] * h.subvec(lo, hi);
    }
    return out;
}

arma::cx_vec cascaded_kron(const ChannelRealization &real, const GroupLayout &layout, const arma::cx_vec &phi_vec,
                           int user)
{
    int mb = layout.group_size();
    arma::uword block = static_cast<arma::uword>(mb) * mb;
    if (phi_vec.n_elem != block * layout.group_count)
        throw std::invalid_argument("cascaded_kron: stacked configuration vector has the wrong length");

    arma::cx_vec h = real.user_channel(user);
    arma::cx_mat stacked(real.bs_ris_channel.n_rows, block * layout.group_count);
    for (int g = 0; g < layout.group_count; ++g)
    {
        arma::uword lo = static_cast<arma::uword>(g) * mb, hi = lo + mb - 1;
        stacked.cols(g * block, (g + 1) * block - 1) =
            arma::kron(h.subvec(lo, hi).st(), real.bs_ris_channel.cols(lo, hi));
    }
    return stacked * phi_vec;
}

arma::cx_mat cascaded_matrix(const ChannelRealization &real, const GroupLayout &layout, int user)
{
    int mb = layout.group_size();
    int L = static_cast<int>(real.path_gains.n_elem);
    int J = static_cast<int>(real.user_gains[user].n_elem);
    arma::uword block = static_cast<arma::uword>(mb) * mb;

    arma::cx_mat angles(static_cast<arma::uword>(J) * L, block * layout.group_count);
    for (int g = 0; g < layout.group_count; ++g)
    {
        arma::uword lo = static_cast<arma::uword>(g) * mb, hi = lo + mb - 1;
        angles.cols(g * block, (g + 1) * block - 1) =
            arma::kron(real.user_steering[user].rows(lo, hi).st(), real.aod_steering.rows(lo, hi).t());
    }
    arma::cx_mat gain_mix = arma::kron(real.user_gains[user].st(), arma::diagmat(real.path_gains));
    return real.bs_steering * gain_mix * angles;
}

arma::cx_mat synthesize_measurements(const ChannelRealization &real, const TrainingSchedule &schedule, int user,
                                     double power, double noise_variance, Rng &rng)
{
    if (noise_variance < 0.0)
        throw std::invalid_argument("synthesize_measurements: noise variance must be non-negative");
    arma::cx_mat g = cascaded_matrix(real, schedule.layout, user);
    arma::cx_mat y = std::sqrt(power) * g * schedule.complex_entries();
    if (noise_variance > 0.0)
        for (arma::uword t = 0; t < y.n_cols; ++t)
            for (arma::uword r = 0; r < y.n_rows; ++r)
                y(r, t) += rng.complex_gaussian(noise_variance);
    return y;
}

} // namespace bdce
