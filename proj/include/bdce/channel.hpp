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

#ifndef BDCE_CHANNEL_HPP
#define BDCE_CHANNEL_HPP

#include "bdce/bdris.hpp"
#include "bdce/geometry.hpp"

#include <limits>
#include <vector>

namespace bdce
{

// Complete description of one simulated uplink. Grid sizes left at zero are
// resolved to their defaults by finalize().
struct SystemConfig
{
    static double nan_default() { return std::numeric_limits<double>::quiet_NaN(); }

    UpaShape bs_shape{8, 8, 0.5};            // receive array at the base station
    GroupLayout ris{{6, 6, 0.5}, 4};         // surface panel and its grouping
    int user_count = 5;                      // K
    int bs_ris_paths = 4;                    // L
    std::vector<int> user_ris_paths;         // J_k per user; empty resolves to 3 each
    double transmit_power = 1.0;             // p [W]
    double carrier_ghz = 28.0;               // informational only
    double bs_ris_distance = 100.0;          // [m]
    double ris_user_distance = 10.0;         // nominal user cluster distance [m]
    double user_sphere_radius = 1.0;         // users drawn uniformly in this ball [m]
    double noise_variance = nan_default();   // delta^2; NaN resolves from snr_db
    double snr_db = 0.0;                     // used when noise_variance is unset
    std::vector<int> pilot_lengths;          // tau_k; empty resolves to {48, 24, 24, ...}
    int dict_v = 0, dict_h = 0;              // angle grids for the typical-user stage (default 2 M_v, 2 M_h)
    int macro_grid_v = 0, macro_grid_h = 0;  // block-identification grids (default 2 M_v, 2 M_h)
    int intra_grid_v = 0, intra_grid_h = 0;  // in-block grids (default 2 M_v, 2 M_h)
    int rotation_grid_1 = 64;                // rotation search points, first array dimension
    int rotation_grid_2 = 64;                // rotation search points, second array dimension
    int delta_grid_v = 0, delta_grid_h = 0;  // offset correlation search (default 8 M_v, 8 M_h)
    bool on_grid = false;                    // snap all angles to the recovery grids
    std::uint64_t seed = 1;
};

// Fill defaulted fields and validate the configuration; throws on violations.
void finalize(SystemConfig &config);

// Noise variance realizing the requested SNR under the nominal path losses:
// SNR = 10 log10(1e-6 * d_BR^-2.2 * d_RU^-2.8 * p / delta^2).
double noise_variance_for_snr(const SystemConfig &config, double snr_db);
double snr_db_for_noise(const SystemConfig &config, double noise_variance);

// One random draw of every channel between the BS, the surface and the users.
// User 0 is always the user nearest the surface. All surface-side steering
// matrices are stored in the rearranged element order.
struct ChannelRealization
{
    std::vector<SpatialFrequencyPair> bs_aoa;                // size L
    std::vector<SpatialFrequencyPair> ris_aod;               // size L
    arma::cx_vec path_gains;                                 // alpha, size L
    std::vector<std::vector<SpatialFrequencyPair>> user_aoa; // per user, size J_k
    std::vector<arma::cx_vec> user_gains;                    // beta_k
    std::vector<double> user_distance;                       // [m]
    arma::cx_mat bs_steering;                                // N x L
    arma::cx_mat aod_steering;                               // M x L, rearranged
    std::vector<arma::cx_mat> user_steering;                 // M x J_k, rearranged
    arma::cx_mat bs_ris_channel;                             // N x M

    arma::cx_vec user_channel(int k) const { return user_steering[k] * user_gains[k]; }
    int typical_user() const;
};

ChannelRealization sample_realization(const SystemConfig &config, Rng &rng);

// Effective uplink channel through a fixed surface configuration, evaluated
// three ways. All agree up to numerical error.
arma::cx_vec cascaded_direct(const ChannelRealization &real, const ScatteringMatrix &scattering, int user);
arma::cx_vec cascaded_kron(const ChannelRealization &real, const GroupLayout &layout, const arma::cx_vec &phi_vec,
                           int user);
// The factored form: user k's measurement matrix G_k with columns indexed by
// the stacked block entries, so that the cascade equals G_k * stacked_vec.
arma::cx_mat cascaded_matrix(const ChannelRealization &real, const GroupLayout &layout, int user);

// Received pilot block Y_k = sqrt(p) G_k Theta_k + noise, one column per slot.
arma::cx_mat synthesize_measurements(const ChannelRealization &real, const TrainingSchedule &schedule, int user,
                                     double power, double noise_variance, Rng &rng);

} // namespace bdce

#endif
