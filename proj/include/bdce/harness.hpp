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

#ifndef BDCE_HARNESS_HPP
#define BDCE_HARNESS_HPP

#include "bdce/channel.hpp"
#include "bdce/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bdce
{

// Monte Carlo evaluation: draw system realisations, run the selected
// estimators on identical data, aggregate normalised errors and runtimes.
// Results are bit-identical for a given master seed regardless of the
// worker-thread count, because every trial derives its own generator and the
// reduction order is fixed.

enum class Estimator
{
    Proposed,
    DirectOmp,
    Sbl,
};

std::string estimator_name(Estimator estimator);
Estimator estimator_from_name(const std::string &name);

enum class SweepParameter
{
    SnrDb,
    PilotScale,
    PathsJ,
    PathsL,
    AntennasN,
    GroupsG,
    RisElements,
};

std::string sweep_parameter_name(SweepParameter parameter);

// One full synthesis: realisation, per-user training schedules, per-user
// pilot blocks, and the true cascaded channels the estimates are scored
// against.
struct TrialData
{
    ChannelRealization realization;
    std::vector<TrainingSchedule> schedules;
    std::vector<arma::cx_mat> measurements;
    std::vector<arma::cx_mat> true_channels;
};

TrialData synthesize_trial(const SystemConfig &config, Rng &rng);

// Per-user channel estimates. The staged protocol runs its three stages; the
// baselines treat each user independently (the Bayesian one still reuses the
// stage-one arrival estimate, which it needs for its projected measurements).
std::vector<arma::cx_mat> estimate_proposed(const SystemConfig &config, const TrialData &data);
std::vector<arma::cx_mat> estimate_direct(const SystemConfig &config, const TrialData &data);
std::vector<arma::cx_mat> estimate_bayesian(const SystemConfig &config, const TrialData &data);

// Sum of squared estimate errors over users divided by the summed squared
// true channel norms.
double relative_error(const std::vector<arma::cx_mat> &estimates,
                      const std::vector<arma::cx_mat> &truth);

struct EstimatorOutcome
{
    double nmse = 1.0;
    double seconds = 0.0;
    bool failed = false;
};

struct TrialOutcome
{
    std::vector<EstimatorOutcome> per_estimator;
};

// Synthesize one trial from the given seed and score every estimator on it.
// An estimator that throws is recorded as failed with unit error.
TrialOutcome run_trial(const SystemConfig &config, const std::vector<Estimator> &estimators,
                       std::uint64_t seed);

struct CampaignOptions
{
    std::vector<Estimator> estimators{Estimator::Proposed};
    int trials = 50;
    std::uint64_t seed = 1;
    int threads = 1;

    // Wall-clock time is the one nondeterministic column in the summary.
    // Disable it to make re-runs byte-identical; time_mean_s then reads 0.
    bool record_timing = true;
};

struct CampaignData
{
    SweepParameter parameter = SweepParameter::SnrDb;
    std::vector<double> values;
    std::vector<Estimator> estimators;
    // outcomes[point][trial]
    std::vector<std::vector<TrialOutcome>> outcomes;
};

struct CampaignRow
{
    SweepParameter parameter = SweepParameter::SnrDb;
    double value = 0.0;
    Estimator estimator = Estimator::Proposed;
    int trials = 0;
    double nmse_mean = 0.0;
    double nmse_std = 0.0;
    double time_mean_s = 0.0;
};

// Copy of the base configuration with one swept field replaced. Fields the
// new value invalidates (resolved grids, derived noise) are reset so that
// finalize re-derives them.
SystemConfig apply_sweep_value(const SystemConfig &base, SweepParameter parameter, double value);

CampaignData run_campaign_data(const SystemConfig &base, SweepParameter parameter,
                               const std::vector<double> &values, const CampaignOptions &options);

std::vector<CampaignRow> summarize(const CampaignData &data);

std::vector<CampaignRow> run_campaign(const SystemConfig &base, SweepParameter parameter,
                                      const std::vector<double> &values, const CampaignOptions &options);

// CSV with the fixed header
// sweep_param,sweep_value,estimator,trials,nmse_mean,nmse_std,time_mean_s.
std::string csv_string(const std::vector<CampaignRow> &rows);
void write_csv(const std::string &path, const std::vector<CampaignRow> &rows);

} // namespace bdce

#endif
