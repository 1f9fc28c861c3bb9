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

#include "bdce/harness.hpp"

#include "bdce/baselines.hpp"
#include "bdce/stage1.hpp"
#include "bdce/stage2.hpp"
#include "bdce/stage3.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace bdce
{

std::string estimator_name(Estimator estimator)
{
    switch (estimator)
    {
    case Estimator::Proposed:
        return "proposed";
    case Estimator::DirectOmp:
        return "direct_omp";
    case Estimator::Sbl:
        return "sbl";
    }
    throw std::logic_error("estimator_name: unknown estimator");
}

Estimator estimator_from_name(const std::string &name)
{
    if (name == "proposed")
        return Estimator::Proposed;
    if (name == "direct_omp")
        return Estimator::DirectOmp;
    if (name == "sbl")
        return Estimator::Sbl;
    throw std::invalid_argument("unknown estimator '" + name + "' (expected proposed, direct_omp or sbl)");
}

std::string sweep_parameter_name(SweepParameter parameter)
{
    switch (parameter)
    {
    case SweepParameter::SnrDb:
        return "snr_db";
    case SweepParameter::PilotScale:
        return "pilot_scale";
    case SweepParameter::PathsJ:
        return "paths_j";
    case SweepParameter::PathsL:
        return "paths_l";
    case SweepParameter::AntennasN:
        return "antennas_n";
    case SweepParameter::GroupsG:
        return "groups_g";
    case SweepParameter::RisElements:
        return "ris_elements";
    }
    throw std::logic_error("sweep_parameter_name: unknown parameter");
}

TrialData synthesize_trial(const SystemConfig &config, Rng &rng)
{
    if (config.pilot_lengths.size() != static_cast<std::size_t>(config.user_count) ||
        std::isnan(config.noise_variance))
        throw std::invalid_argument("synthesize_trial: configuration has not been finalized");

    TrialData data;
    data.realization = sample_realization(config, rng);
    for (int k = 0; k < config.user_count; ++k)
        data.schedules.push_back(bernoulli_training_schedule(config.ris, config.pilot_lengths[k], rng));
    for (int k = 0; k < config.user_count; ++k)
    {
        data.measurements.push_back(synthesize_measurements(data.realization, data.schedules[k], k,
                                                            config.transmit_power, config.noise_variance,
                                                            rng));
        data.true_channels.push_back(cascaded_matrix(data.realization, config.ris, k));
    }
    return data;
}

namespace
{

AoaEstimate run_arrival_stage(const SystemConfig &config, const TrialData &data)
{
    Stage1Options options;
    options.known_count = config.bs_ris_paths;
    options.rotation_grid_1 = config.rotation_grid_1;
    options.rotation_grid_2 = config.rotation_grid_2;
    return estimate_common_aoa(data.measurements[0], config.bs_shape, options);
}

int realized_path_count(const TrialData &data, int user)
{
    return static_cast<int>(data.realization.user_gains[user].n_elem);
}

} // namespace

std::vector<arma::cx_mat> estimate_proposed(const SystemConfig &config, const TrialData &data)
{
    AoaEstimate aoa = run_arrival_stage(config, data);
    AngularDictionary surface_dict = build_dictionary(config.ris, config.dict_v, config.dict_h);

    Stage2Options stage2;
    stage2.user_sparsity = realized_path_count(data, 0);
    stage2.delta_grid_v = config.delta_grid_v;
    stage2.delta_grid_h = config.delta_grid_h;
    Stage2Result reference = estimate_typical_user(data.measurements[0], config.transmit_power,
                                                   aoa.bs_steering, data.schedules[0], surface_dict,
                                                   surface_dict, stage2);

    std::vector<arma::cx_mat> channels(config.user_count);
    channels[0] = reference.channel;

    AngularDictionary intra_dict = build_dictionary(config.ris, config.intra_grid_v, config.intra_grid_h);
    for (int k = 1; k < config.user_count; ++k)
    {
        Stage3Options stage3;
        stage3.user_sparsity = realized_path_count(data, k);
        stage3.macro_grid_v = config.macro_grid_v;
        stage3.macro_grid_h = config.macro_grid_h;
        channels[k] = estimate_other_user(data.measurements[k], config.transmit_power, aoa.bs_steering,
                                          data.schedules[k], intra_dict, reference, stage3)
                          .channel;
    }
    return channels;
}

std::vector<arma::cx_mat> estimate_direct(const SystemConfig &config, const TrialData &data)
{
    GroupLayout bs_layout = make_group_layout(config.bs_shape, config.bs_shape.count());
    AngularDictionary bs_dict =
        build_dictionary(bs_layout, 2 * config.bs_shape.vertical, 2 * config.bs_shape.horizontal);
    AngularDictionary surface_dict = build_dictionary(config.ris, config.dict_v, config.dict_h);

    std::vector<arma::cx_mat> channels(config.user_count);
    for (int k = 0; k < config.user_count; ++k)
    {
        DirectOmpOptions options;
        options.sparsity = config.bs_ris_paths * config.bs_ris_paths * realized_path_count(data, k);
        channels[k] = direct_omp_estimate(data.measurements[k], config.transmit_power, data.schedules[k],
                                          bs_dict, surface_dict, surface_dict, options)
                          .channel;
    }
    return channels;
}

std::vector<arma::cx_mat> estimate_bayesian(const SystemConfig &config, const TrialData &data)
{
    AoaEstimate aoa = run_arrival_stage(config, data);
    AngularDictionary surface_dict = build_dictionary(config.ris, config.dict_v, config.dict_h);

    std::vector<arma::cx_mat> channels(config.user_count);
    for (int k = 0; k < config.user_count; ++k)
        channels[k] = sbl_estimate(data.measurements[k], config.transmit_power, aoa.bs_steering,
                                   data.schedules[k], surface_dict, surface_dict, SblOptions{})
                          .channel;
    return channels;
}

double relative_error(const std::vector<arma::cx_mat> &estimates, const std::vector<arma::cx_mat> &truth)
{
    if (estimates.size() != truth.size() || truth.empty())
        throw std::invalid_argument("relative_error: user counts do not match");
    double error = 0.0, reference = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k)
    {
        if (estimates[k].n_rows != truth[k].n_rows || estimates[k].n_cols != truth[k].n_cols)
            throw std::invalid_argument("relative_error: channel shapes do not match for user " +
                                        std::to_string(k));
        double diff = arma::norm(estimates[k] - truth[k], "fro");
        double base = arma::norm(truth[k], "fro");
        error += diff * diff;
        reference += base * base;
    }
    if (!(reference > 0.0))
        throw std::invalid_argument("relative_error: true channels are all zero");
    return error / reference;
}

TrialOutcome run_trial(const SystemConfig &config, const std::vector<Estimator> &estimators,
                       std::uint64_t seed)
{
    Rng rng(seed);
    TrialData data = synthesize_trial(config, rng);

    TrialOutcome outcome;
    for (Estimator estimator : estimators)
    {
        EstimatorOutcome slot;
        auto start = std::chrono::steady_clock::now();
        try
        {
            std::vector<arma::cx_mat> estimates;
            switch (estimator)
            {
            case Estimator::Proposed:
                estimates = estimate_proposed(config, data);
                break;
            case Estimator::DirectOmp:
                estimates = estimate_direct(config, data);
                break;
            case Estimator::Sbl:
                estimates = estimate_bayesian(config, data);
                break;
            }
            slot.nmse = relative_error(estimates, data.true_channels);
        }
        catch (const std::exception &err)
        {
            slot.failed = true;
            slot.nmse = 1.0;
            std::cerr << "warning: estimator " << estimator_name(estimator) << " failed on seed " << seed
                      << ": " << err.what() << "\n";
        }
        slot.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        outcome.per_estimator.push_back(slot);
    }
    return outcome;
}

SystemConfig apply_sweep_value(const SystemConfig &base, SweepParameter parameter, double value)
{
    SystemConfig config = base;
    switch (parameter)
    {
    case SweepParameter::SnrDb:
        config.snr_db = value;
        config.noise_variance = SystemConfig::nan_default();
        break;
    case SweepParameter::PilotScale:
    {
        if (!(value > 0.0))
            throw std::invalid_argument("pilot scale must be positive");
        SystemConfig resolved = base;
        finalize(resolved);
        config.pilot_lengths.clear();
        for (int length : resolved.pilot_lengths)
            config.pilot_lengths.push_back(
                std::max(1, static_cast<int>(std::lround(length * value))));
        break;
    }
    case SweepParameter::PathsJ:
        config.user_ris_paths.assign(static_cast<std::size_t>(std::max(config.user_count, 1)),
                                     static_cast<int>(std::lround(value)));
        break;
    case SweepParameter::PathsL:
        config.bs_ris_paths = static_cast<int>(std::lround(value));
        break;
    case SweepParameter::AntennasN:
    {
        int count = static_cast<int>(std::lround(value));
        int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
        if (count < 1 || side * side != count)
            throw std::invalid_argument("antenna sweep values must be perfect squares");
        config.bs_shape.horizontal = side;
        config.bs_shape.vertical = side;
        break;
    }
    case SweepParameter::GroupsG:
        config.ris.group_count = static_cast<int>(std::lround(value));
        break;
    case SweepParameter::RisElements:
    {
        int count = static_cast<int>(std::lround(value));
        int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
        if (count < 1 || side * side != count)
            throw std::invalid_argument("surface sweep values must be perfect squares");
        config.ris.shape.horizontal = side;
        config.ris.shape.vertical = side;
        // These were resolved against the old panel size.
        config.dict_v = config.dict_h = 0;
        config.macro_grid_v = config.macro_grid_h = 0;
        config.intra_grid_v = config.intra_grid_h = 0;
        config.delta_grid_v = config.delta_grid_h = 0;
        break;
    }
    }
    return config;
}

CampaignData run_campaign_data(const SystemConfig &base, SweepParameter parameter,
                               const std::vector<double> &values, const CampaignOptions &options)
{
    if (values.empty())
        throw std::invalid_argument("run_campaign_data: no sweep values");
    if (options.trials < 1)
        throw std::invalid_argument("run_campaign_data: trial count must be positive");
    if (options.estimators.empty())
        throw std::invalid_argument("run_campaign_data: no estimators selected");

    std::vector<SystemConfig> configs;
    for (double value : values)
    {
        SystemConfig config = apply_sweep_value(base, parameter, value);
        finalize(config);
        configs.push_back(config);
    }

    CampaignData data;
    data.parameter = parameter;
    data.values = values;
    data.estimators = options.estimators;
    data.outcomes.assign(values.size(), std::vector<TrialOutcome>(options.trials));

    struct Item
    {
        std::size_t point;
        int trial;
    };
    std::vector<Item> items;
    for (std::size_t p = 0; p < values.size(); ++p)
        for (int t = 0; t < options.trials; ++t)
            items.push_back({p, t});

    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (;;)
        {
            std::size_t index = cursor.fetch_add(1);
            if (index >= items.size())
                return;
            const Item &item = items[index];
            std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(item.point),
                                             static_cast<std::uint64_t>(item.trial));
            TrialOutcome outcome = run_trial(configs[item.point], options.estimators, seed);
            if (!options.record_timing)
                for (EstimatorOutcome &slot : outcome.per_estimator)
                    slot.seconds = 0.0;
            data.outcomes[item.point][item.trial] = outcome;
        }
    };

    int workers = std::max(1, options.threads);
    if (workers == 1)
    {
        work();
    }
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (std::thread &thread : pool)
            thread.join();
    }
    return data;
}

std::vector<CampaignRow> summarize(const CampaignData &data)
{
    std::vector<CampaignRow> rows;
    for (std::size_t p = 0; p < data.values.size(); ++p)
        for (std::size_t e = 0; e < data.estimators.size(); ++e)
        {
            const std::vector<TrialOutcome> &trials = data.outcomes[p];
            double nmse_sum = 0.0, time_sum = 0.0;
            for (const TrialOutcome &trial : trials)
            {
                nmse_sum += trial.per_estimator[e].nmse;
                time_sum += trial.per_estimator[e].seconds;
            }
            double count = static_cast<double>(trials.size());
            double mean = nmse_sum / count;
            double variance = 0.0;
            for (const TrialOutcome &trial : trials)
            {
                double diff = trial.per_estimator[e].nmse - mean;
                variance += diff * diff;
            }

            CampaignRow row;
            row.parameter = data.parameter;
            row.value = data.values[p];
            row.estimator = data.estimators[e];
            row.trials = static_cast<int>(trials.size());
            row.nmse_mean = mean;
            row.nmse_std = trials.size() > 1 ? std::sqrt(variance / (count - 1.0)) : 0.0;
            row.time_mean_s = time_sum / count;
            rows.push_back(row);
        }
    return rows;
}

std::vector<CampaignRow> run_campaign(const SystemConfig &base, SweepParameter parameter,
                                      const std::vector<double> &values, const CampaignOptions &options)
{
    return summarize(run_campaign_data(base, parameter, values, options));
}

namespace
{

std::string format_double(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

} // namespace

std::string csv_string(const std::vector<CampaignRow> &rows)
{
    std::string out = "sweep_param,sweep_value,estimator,trials,nmse_mean,nmse_std,time_mean_s\n";
    for (const CampaignRow &row : rows)
    {
        out += sweep_parameter_name(row.parameter);
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += estimator_name(row.estimator);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += format_double(row.nmse_mean);
        out += ',';
        out += format_double(row.nmse_std);
        out += ',';
        out += format_double(row.time_mean_s);
        out += '\n';
    }
    return out;
}

void write_csv(const std::string &path, const std::vector<CampaignRow> &rows)
{
    std::ofstream file(path);
    if (!file)
        throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    file << csv_string(rows);
    if (!file.good())
        throw std::runtime_error("write_csv: failed while writing '" + path + "'");
}

} // namespace bdce
