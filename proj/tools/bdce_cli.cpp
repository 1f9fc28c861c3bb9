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

#include "CLI11.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{

std::vector<bdce::Estimator> parse_estimators(const std::vector<std::string> &names)
{
    if (names.empty())
        throw std::invalid_argument("at least one estimator is required");
    std::vector<bdce::Estimator> out;
    for (const std::string &name : names)
        out.push_back(bdce::estimator_from_name(name));
    return out;
}

void emit(const std::vector<bdce::CampaignRow> &rows, const std::string &out_path)
{
    if (out_path.empty())
        std::fputs(bdce::csv_string(rows).c_str(), stdout);
    else
        bdce::write_csv(out_path, rows);
}

// Tiny fixed scenario whose campaign is re-run three times (twice serially,
// once on two workers); any byte difference in the CSV is a defect.
int run_selftest(const std::string &out_path)
{
    bdce::SystemConfig config;
    config.bs_shape = bdce::UpaShape{2, 2, 0.5};
    config.ris = bdce::make_group_layout(bdce::UpaShape{2, 2, 0.5}, 4);
    config.user_count = 2;
    config.bs_ris_paths = 1;
    config.user_ris_paths = {1, 1};
    config.pilot_lengths = {8, 6};
    config.snr_db = 5.0;

    bdce::CampaignOptions options;
    options.estimators = {bdce::Estimator::Proposed, bdce::Estimator::DirectOmp};
    options.trials = 3;
    options.seed = 1;
    options.threads = 1;
    options.record_timing = false;

    std::vector<double> values{0.0, 10.0};
    std::vector<bdce::CampaignRow> rows = bdce::run_campaign(config, bdce::SweepParameter::SnrDb, values, options);
    std::string first = bdce::csv_string(rows);
    std::string second = bdce::csv_string(bdce::run_campaign(config, bdce::SweepParameter::SnrDb, values, options));
    options.threads = 2;
    std::string third = bdce::csv_string(bdce::run_campaign(config, bdce::SweepParameter::SnrDb, values, options));

    if (first != second || first != third)
    {
        std::fprintf(stderr, "error: selftest CSV outputs differ between identically seeded runs\n");
        return 1;
    }
    if (!out_path.empty())
        bdce::write_csv(out_path, rows);
    std::printf("selftest ok\n");
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo campaigns for staged cascaded-channel estimation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI file");

    std::uint64_t seed = 1;
    int trials = 50;
    int threads = 1;
    std::string out_path;
    std::vector<std::string> estimator_names{"proposed", "direct_omp"};
    bool on_grid = false;

    int bs_vertical = 8, bs_horizontal = 8;
    int ris_vertical = 6, ris_horizontal = 6;
    int groups = 4;
    int users = 5;
    int paths_l = 4;
    int paths_j = 0;
    std::vector<int> pilots;
    double snr_db = 0.0;
    double noise_variance = bdce::SystemConfig::nan_default();
    double power = 1.0;
    int rotation_grid = 64;

    app.add_option("--seed", seed, "Master seed for all trials");
    auto *trials_option = app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    app.add_option("--threads", threads, "Worker threads (outcomes are thread-count invariant)");
    app.add_option("--out", out_path, "Write the CSV here instead of stdout");
    app.add_option("--estimators", estimator_names, "Estimators to run: proposed, direct_omp, sbl")
        ->delimiter(',');
    app.add_flag("--on-grid", on_grid, "Snap all angles to the recovery grids");
    bool no_timing = false;
    app.add_flag("--no-timing", no_timing,
                 "Report time_mean_s as 0 so re-runs are byte-identical");

    app.add_option("--bs-vertical", bs_vertical, "Station array rows");
    app.add_option("--bs-horizontal", bs_horizontal, "Station array columns");
    app.add_option("--ris-vertical", ris_vertical, "Surface rows");
    app.add_option("--ris-horizontal", ris_horizontal, "Surface columns");
    app.add_option("--groups", groups, "Surface group count");
    app.add_option("--users", users, "Number of users");
    app.add_option("--paths-l", paths_l, "Station-surface path count");
    app.add_option("--paths-j", paths_j, "Per-user path count (0 keeps the default)");
    app.add_option("--pilots", pilots, "Per-user pilot lengths (empty keeps the defaults)")
        ->delimiter(',');
    app.add_option("--snr-db", snr_db, "Operating SNR when the noise variance is unset");
    app.add_option("--noise-variance", noise_variance, "Noise variance (overrides --snr-db)");
    app.add_option("--power", power, "Transmit power");
    app.add_option("--rotation-grid", rotation_grid, "Rotation search points per axis");

    CLI::App *sweep_snr = app.add_subcommand("sweep-snr", "Sweep the operating SNR");
    std::vector<double> snr_values{-10.0, -5.0, 0.0, 5.0, 10.0};
    sweep_snr->add_option("--values", snr_values, "SNR points in dB")->delimiter(',');

    CLI::App *sweep_pilot = app.add_subcommand("sweep-pilot", "Sweep the pilot budget");
    std::vector<double> pilot_scales{0.5, 1.0, 1.5, 2.0};
    sweep_pilot->add_option("--scales", pilot_scales, "Multipliers on the base pilot lengths")
        ->delimiter(',');

    CLI::App *sweep_paths = app.add_subcommand("sweep-paths", "Sweep a path count");
    std::string path_param = "j";
    std::vector<double> path_values{1.0, 2.0, 3.0, 4.0};
    sweep_paths->add_option("--param", path_param, "Which count to sweep: j (user side) or l (station side)")
        ->check(CLI::IsMember({"j", "l"}));
    sweep_paths->add_option("--values", path_values, "Path counts")->delimiter(',');

    CLI::App *sweep_antennas = app.add_subcommand("sweep-antennas", "Sweep an array size");
    std::string antenna_param = "n";
    std::vector<double> antenna_values;
    sweep_antennas->add_option("--param", antenna_param, "Which array to sweep: n (station) or m (surface)")
        ->check(CLI::IsMember({"n", "m"}));
    sweep_antennas->add_option("--values", antenna_values, "Element counts (perfect squares)")
        ->delimiter(',');

    CLI::App *bench = app.add_subcommand("bench-runtime", "Measure per-trial runtimes over surface sizes");
    std::vector<double> bench_values{16.0, 36.0};
    bench->add_option("--values", bench_values, "Surface element counts (perfect squares)")->delimiter(',');

    CLI::App *selftest = app.add_subcommand("selftest", "Verify bit-identical campaign reproduction");

    for (CLI::App *sub : {sweep_snr, sweep_pilot, sweep_paths, sweep_antennas, bench, selftest})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (selftest->parsed())
            return run_selftest(out_path);

        bdce::SystemConfig config;
        config.bs_shape = bdce::UpaShape{bs_horizontal, bs_vertical, 0.5};
        config.ris = bdce::make_group_layout(bdce::UpaShape{ris_horizontal, ris_vertical, 0.5}, groups);
        config.user_count = users;
        config.bs_ris_paths = paths_l;
        if (paths_j > 0)
            config.user_ris_paths.assign(users, paths_j);
        config.pilot_lengths = pilots;
        config.snr_db = snr_db;
        config.noise_variance = noise_variance;
        config.transmit_power = power;
        config.rotation_grid_1 = rotation_grid;
        config.rotation_grid_2 = rotation_grid;
        config.on_grid = on_grid;

        bdce::CampaignOptions options;
        options.estimators = parse_estimators(estimator_names);
        options.trials = trials;
        options.seed = seed;
        options.threads = threads;
        options.record_timing = !no_timing;

        if (sweep_snr->parsed())
            emit(bdce::run_campaign(config, bdce::SweepParameter::SnrDb, snr_values, options), out_path);
        else if (sweep_pilot->parsed())
            emit(bdce::run_campaign(config, bdce::SweepParameter::PilotScale, pilot_scales, options), out_path);
        else if (sweep_paths->parsed())
            emit(bdce::run_campaign(config,
                                    path_param == "j" ? bdce::SweepParameter::PathsJ
                                                      : bdce::SweepParameter::PathsL,
                                    path_values, options),
                 out_path);
        else if (sweep_antennas->parsed())
        {
            if (antenna_values.empty())
                antenna_values = antenna_param == "n" ? std::vector<double>{16.0, 36.0, 64.0}
                                                      : std::vector<double>{16.0, 36.0};
            emit(bdce::run_campaign(config,
                                    antenna_param == "n" ? bdce::SweepParameter::AntennasN
                                                         : bdce::SweepParameter::RisElements,
                                    antenna_values, options),
                 out_path);
        }
        else if (bench->parsed())
        {
            if (trials_option->count() == 0)
                options.trials = 10;
            emit(bdce::run_campaign(config, bdce::SweepParameter::RisElements, bench_values, options),
                 out_path);
        }
    }
    catch (const std::exception &error)
    {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 1;
    }
    return 0;
}
