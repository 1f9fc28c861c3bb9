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

#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <set>

using namespace bdce;
using bdce_test::rel_diff;

namespace
{

SystemConfig small_config()
{
    SystemConfig config;
    config.bs_shape = UpaShape{4, 4, 0.5};
    config.ris = make_group_layout(UpaShape{6, 6, 0.5}, 4);
    config.user_count = 2;
    config.bs_ris_paths = 3;
    config.user_ris_paths = {2, 2};
    config.pilot_lengths = {16, 8};
    config.noise_variance = 0.0;
    finalize(config);
    return config;
}

} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("finalize fills documented defaults")
    {
        SystemConfig config;
        config.user_count = 3;
        finalize(config);
        REQUIRE(config.pilot_lengths.size() == 3);
        CHECK(config.pilot_lengths[0] == 48);
        CHECK(config.pilot_lengths[1] == 24);
        CHECK(config.pilot_lengths[2] == 24);
        REQUIRE(config.user_ris_paths.size() == 3);
        CHECK(config.user_ris_paths[1] == 3);
        CHECK(config.dict_v == 12);
        CHECK(config.dict_h == 12);
        CHECK(config.macro_grid_v == 12);
        CHECK(config.intra_grid_h == 12);
        CHECK(config.delta_grid_v == 48);
        CHECK(config.delta_grid_h == 48);
        CHECK(!std::isnan(config.noise_variance));

        // Idempotent.
        SystemConfig again = config;
        finalize(again);
        CHECK(again.noise_variance == config.noise_variance);
        CHECK(again.dict_v == config.dict_v);
    }

    TEST_CASE("finalize rejects invalid setups")
    {
        SystemConfig config;
        config.user_count = 0;
        CHECK_THROWS_AS(finalize(config), std::invalid_argument);

        config = SystemConfig{};
        config.pilot_lengths = {10};
        CHECK_THROWS_AS(finalize(config), std::invalid_argument); // one length for five users

        config = SystemConfig{};
        config.dict_v = 3; // undersamples the 6-row surface
        CHECK_THROWS_AS(finalize(config), std::invalid_argument);

        config = SystemConfig{};
        config.transmit_power = 0.0;
        CHECK_THROWS_AS(finalize(config), std::invalid_argument);

        config = SystemConfig{};
        config.on_grid = true;
        config.bs_shape.spacing = 0.4;
        CHECK_THROWS_AS(finalize(config), std::invalid_argument);
    }

    TEST_CASE("noise variance and SNR are inverse maps")
    {
        SystemConfig config;
        for (double snr : {-10.0, 0.0, 7.5})
        {
            double noise = noise_variance_for_snr(config, snr);
            CHECK(snr_db_for_noise(config, noise) == doctest::Approx(snr).epsilon(1e-12));
        }
        // At the documented distances the 0 dB noise floor equals the product
        // of the two path losses.
        double expected = 1e-6 * std::pow(100.0, -2.2) * std::pow(10.0, -2.8);
        CHECK(noise_variance_for_snr(config, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("realizations carry consistent geometry")
    {
        SystemConfig config = small_config();
        Rng rng(2024);
        ChannelRealization real = sample_realization(config, rng);

        REQUIRE(real.bs_aoa.size() == 3);
        REQUIRE(real.path_gains.n_elem == 3);
        REQUIRE(real.user_gains.size() == 2);
        REQUIRE(real.user_gains[0].n_elem == 2);

        for (int l = 0; l < 3; ++l)
        {
            CHECK(rel_diff(arma::cx_vec(real.bs_steering.col(l)),
                           upa_response(config.bs_shape, real.bs_aoa[l])) < 1e-12);
            CHECK(rel_diff(arma::cx_vec(real.aod_steering.col(l)),
                           rearranged_upa_response(config.ris, real.ris_aod[l])) < 1e-12);
        }
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                CHECK(rel_diff(arma::cx_vec(real.user_steering[k].col(j)),
                               rearranged_upa_response(config.ris, real.user_aoa[k][j])) < 1e-12);

        // Station-surface channel reconstructed from the drawn parameters.
        arma::cx_mat expected(16, 36, arma::fill::zeros);
        for (int l = 0; l < 3; ++l)
            expected += real.path_gains[l] * upa_response(config.bs_shape, real.bs_aoa[l]) *
                        rearranged_upa_response(config.ris, real.ris_aod[l]).t();
        CHECK(rel_diff(real.bs_ris_channel, expected) < 1e-12);

        // The typical user is the nearest one and sits first.
        CHECK(real.typical_user() == 0);
        CHECK(real.user_distance[0] <= real.user_distance[1]);
        for (double d : real.user_distance)
        {
            CHECK(d >= config.ris_user_distance - config.user_sphere_radius - 1e-9);
            CHECK(d <= config.ris_user_distance + config.user_sphere_radius + 1e-9);
        }
    }

    TEST_CASE("nearest-user relabeling keeps per-user fields aligned")
    {
        // Users with unequal path counts: the relabeling must carry angles,
        // gains and steering together, whichever user ends up first.
        SystemConfig config;
        config.bs_shape = UpaShape{4, 4, 0.5};
        config.ris = make_group_layout(UpaShape{6, 6, 0.5}, 4);
        config.user_count = 3;
        config.bs_ris_paths = 2;
        config.user_ris_paths = {1, 3, 2};
        config.pilot_lengths = {8, 8, 8};
        config.noise_variance = 0.0;
        finalize(config);

        for (int t = 0; t < 20; ++t)
        {
            Rng rng(5100 + t);
            ChannelRealization real = sample_realization(config, rng);
            std::multiset<int> counts;
            for (int k = 0; k < 3; ++k)
            {
                std::size_t J = real.user_aoa[k].size();
                counts.insert(static_cast<int>(J));
                REQUIRE(real.user_gains[k].n_elem == J);
                REQUIRE(real.user_steering[k].n_cols == J);
                for (std::size_t j = 0; j < J; ++j)
                    CHECK(rel_diff(arma::cx_vec(real.user_steering[k].col(j)),
                                   rearranged_upa_response(config.ris, real.user_aoa[k][j])) < 1e-12);
            }
            CHECK(counts == std::multiset<int>{1, 2, 3});
            CHECK(real.typical_user() == 0);
        }
    }

    TEST_CASE("path gain power matches the distance law")
    {
        SystemConfig config = small_config();
        config.bs_ris_paths = 6;
        config.user_ris_paths = {4, 4};
        finalize(config);

        Rng rng(9);
        double bs_sum = 0.0, user_sum = 0.0;
        int bs_count = 0, user_count = 0;
        for (int trial = 0; trial < 400; ++trial)
        {
            ChannelRealization real = sample_realization(config, rng);
            for (arma::uword l = 0; l < real.path_gains.n_elem; ++l)
            {
                bs_sum += std::norm(real.path_gains[l]);
                ++bs_count;
            }
            for (int k = 0; k < config.user_count; ++k)
            {
                double variance = 1e-3 * std::pow(real.user_distance[k], -2.8);
                for (arma::uword j = 0; j < real.user_gains[k].n_elem; ++j)
                {
                    user_sum += std::norm(real.user_gains[k][j]) / variance;
                    ++user_count;
                }
            }
        }
        double bs_variance = 1e-3 * std::pow(config.bs_ris_distance, -2.2);
        CHECK(bs_sum / bs_count == doctest::Approx(bs_variance).epsilon(0.05));
        CHECK(user_sum / user_count == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("on-grid draws snap to the recovery grids")
    {
        SystemConfig config = small_config();
        config.on_grid = true;
        finalize(config);
        Rng rng(5);
        ChannelRealization real = sample_realization(config, rng);

        for (const SpatialFrequencyPair &pair : real.bs_aoa)
        {
            double bins_v = pair.vertical * config.bs_shape.vertical;
            double bins_h = pair.horizontal * config.bs_shape.horizontal;
            CHECK(std::abs(bins_v - std::round(bins_v)) < 1e-12);
            CHECK(std::abs(bins_h - std::round(bins_h)) < 1e-12);
        }
        auto on_dict_grid = [&](const SpatialFrequencyPair &pair) {
            double a = (pair.vertical / config.ris.shape.spacing + 1.0) * config.dict_v / 2.0;
            double b = (pair.horizontal / config.ris.shape.spacing + 1.0) * config.dict_h / 2.0;
            return std::abs(a - std::round(a)) < 1e-12 && std::abs(b - std::round(b)) < 1e-12;
        };
        for (const SpatialFrequencyPair &pair : real.ris_aod)
            CHECK(on_dict_grid(pair));
        for (int k = 0; k < config.user_count; ++k)
            for (const SpatialFrequencyPair &pair : real.user_aoa[k])
                CHECK(on_dict_grid(pair));

        // Departure pairs are distinct in on-grid mode.
        for (std::size_t a = 0; a < real.ris_aod.size(); ++a)
            for (std::size_t b = a + 1; b < real.ris_aod.size(); ++b)
                CHECK(bdce_test::freq_dist(real.ris_aod[a], real.ris_aod[b]) > 1e-9);
    }

    TEST_CASE("on-grid draws refuse more paths than grid cells")
    {
        SystemConfig config;
        config.bs_shape = UpaShape{4, 4, 0.5};
        config.ris = make_group_layout(UpaShape{2, 2, 0.5}, 1);
        config.user_count = 1;
        config.bs_ris_paths = 2;
        config.user_ris_paths = {5};
        config.dict_v = 2;
        config.dict_h = 2; // four cells, five paths
        config.pilot_lengths = {8};
        config.noise_variance = 0.0;
        config.on_grid = true;
        finalize(config);
        Rng rng(1);
        CHECK_THROWS_AS(sample_realization(config, rng), std::invalid_argument);
    }

    TEST_CASE("direct, stacked and factored cascades agree")
    {
        SystemConfig config = small_config();
        for (int groups : {1, 4, 36})
        {
            config.ris = make_group_layout(UpaShape{6, 6, 0.5}, groups);
            SystemConfig run = config;
            finalize(run);
            Rng rng(40 + groups);
            ChannelRealization real = sample_realization(run, rng);
            ScatteringMatrix scattering = random_unitary_scattering(run.ris, rng);
            arma::cx_vec phi = scattering.stacked_vec();

            for (int user = 0; user < run.user_count; ++user)
            {
                arma::cx_vec direct = cascaded_direct(real, scattering, user);
                arma::cx_vec stacked = cascaded_kron(real, run.ris, phi, user);
                arma::cx_vec factored = cascaded_matrix(real, run.ris, user) * phi;
                CHECK(rel_diff(stacked, direct) < 1e-9);
                CHECK(rel_diff(factored, direct) < 1e-9);
            }
        }
    }

    TEST_CASE("noiseless measurements follow the slot scattering")
    {
        SystemConfig config = small_config();
        Rng rng(12);
        ChannelRealization real = sample_realization(config, rng);
        TrainingSchedule schedule = bernoulli_training_schedule(config.ris, 6, rng);
        double power = 2.5;
        arma::cx_mat y = synthesize_measurements(real, schedule, 1, power, 0.0, rng);
        REQUIRE(y.n_cols == 6);
        for (int t = 0; t < 6; ++t)
        {
            arma::cx_vec expected = std::sqrt(power) * cascaded_direct(real, schedule.slot_scattering(t), 1);
            CHECK(rel_diff(arma::cx_vec(y.col(t)), expected) < 1e-9);
        }
    }

    TEST_CASE("noise injection matches the requested variance")
    {
        SystemConfig config = small_config();
        Rng rng(31);
        ChannelRealization real = sample_realization(config, rng);
        TrainingSchedule schedule = bernoulli_training_schedule(config.ris, 256, rng);
        double variance = 0.125;
        Rng noise_rng(55);
        arma::cx_mat clean = synthesize_measurements(real, schedule, 0, 1.0, 0.0, rng);
        arma::cx_mat noisy = synthesize_measurements(real, schedule, 0, 1.0, variance, noise_rng);
        arma::cx_mat noise = noisy - clean;
        double mean_power = arma::accu(arma::square(arma::abs(noise))) / noise.n_elem;
        CHECK(mean_power == doctest::Approx(variance).epsilon(0.05));
    }
}
