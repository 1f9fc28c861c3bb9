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
//
// Release gate. Each criterion prints one [PASS]/[FAIL] line; the binary
// exits nonzero if any criterion fails. Tolerances, trial counts and runtime
// limits are pinned here on purpose: loosening them is a release decision,
// not a code change.

#include "bdce/baselines.hpp"
#include "bdce/channel.hpp"
#include "bdce/harness.hpp"
#include "bdce/stage1.hpp"
#include "bdce/stage2.hpp"
#include "bdce/stage3.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace bdce;

namespace
{

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_error(const arma::cx_vec &a, const arma::cx_vec &b)
{
    return arma::norm(a - b) / arma::norm(b);
}

double mean(const std::vector<double> &v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double> &v)
{
    if (v.size() < 2)
        return 0.0;
    double m = mean(v), acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string fmt(double x)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3g", x);
    return buffer;
}

struct Criterion
{
    std::string label;
    std::function<bool(std::string &)> run;
};

// Shared desk configuration: 4x4 station array, 4x4 surface in four groups,
// two users with two paths everywhere, full pilot budget. Draws snap to the
// recovery grids so that noise, not grid quantization, drives the error; at
// this array size the off-grid quantization floor sits near NMSE 0.3 and
// would mask every trend the campaign criteria measure.
SystemConfig desk_config()
{
    SystemConfig config;
    config.bs_shape = UpaShape{4, 4, 0.5};
    config.ris = make_group_layout(UpaShape{4, 4, 0.5}, 4);
    config.user_count = 2;
    config.bs_ris_paths = 2;
    config.user_ris_paths = {2, 2};
    config.pilot_lengths = {48, 24};
    config.snr_db = 0.0;
    config.on_grid = true;
    return config;
}

// Wider desk configuration on a 6x6 surface; `groups` is 4 or 9 (or 36).
SystemConfig wide_config(int groups)
{
    SystemConfig config;
    config.bs_shape = UpaShape{4, 4, 0.5};
    config.ris = make_group_layout(UpaShape{6, 6, 0.5}, groups);
    config.user_count = 2;
    config.bs_ris_paths = 3;
    config.user_ris_paths = {2, 2};
    config.pilot_lengths = {48, 24};
    config.snr_db = 0.0;
    config.on_grid = true;
    return config;
}

// Per-trial proposed-protocol errors at fixed per-trial seeds, so that sweeps
// over a single knob stay paired: the physical channel draw depends only on
// the seed and the array shapes, never on the knob under test.
std::vector<double> paired_nmse(const SystemConfig &config, int trials, std::uint64_t master,
                                Estimator estimator)
{
    std::vector<double> out;
    out.reserve(trials);
    for (int t = 0; t < trials; ++t)
    {
        TrialOutcome outcome = run_trial(config, {estimator}, derive_seed(master, 0, t));
        out.push_back(outcome.per_estimator[0].nmse);
    }
    return out;
}

// --- C1 ------------------------------------------------------------------

bool criterion_equivalence(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    struct Case
    {
        UpaShape bs, ris;
        int groups;
    };
    std::vector<Case> cases;
    for (UpaShape bs : {UpaShape{2, 2, 0.5}, UpaShape{4, 4, 0.5}, UpaShape{8, 8, 0.5}})
    {
        for (int g : {1, 4, 8, 16})
            cases.push_back({bs, UpaShape{4, 4, 0.5}, g});
        for (int g : {1, 4, 9, 36})
            cases.push_back({bs, UpaShape{6, 6, 0.5}, g});
    }

    int triples = 0;
    double worst = 0.0;
    for (size_t i = 0; i < cases.size(); ++i)
    {
        for (int repeat = 0; repeat < 5; ++repeat)
        {
            SystemConfig config;
            config.bs_shape = cases[i].bs;
            config.ris = make_group_layout(cases[i].ris, cases[i].groups);
            config.user_count = 1;
            config.bs_ris_paths = 1 + static_cast<int>((i + repeat) % 4);
            config.user_ris_paths = {1 + static_cast<int>(i % 3)};
            config.pilot_lengths = {8};
            config.noise_variance = 0.0;
            finalize(config);

            Rng rng(derive_seed(101, i, repeat));
            ChannelRealization real = sample_realization(config, rng);
            ScatteringMatrix scattering = random_unitary_scattering(config.ris, rng);
            arma::cx_vec phi = scattering.stacked_vec();

            arma::cx_vec direct = cascaded_direct(real, scattering, 0);
            arma::cx_vec via_kron = cascaded_kron(real, config.ris, phi, 0);
            arma::cx_vec via_matrix = cascaded_matrix(real, config.ris, 0) * phi;
            worst = std::max(worst, rel_error(via_kron, direct));
            worst = std::max(worst, rel_error(via_matrix, direct));
            ++triples;
        }
    }

    double elapsed = seconds_since(start);
    std::ostringstream s;
    s << triples << " triples, max relative spread " << fmt(worst) << ", " << fmt(elapsed) << "s";
    detail = s.str();
    return triples >= 100 && worst < 1e-9 && elapsed < 10.0;
}

// --- C2 ------------------------------------------------------------------

// Stacked cascaded coefficient vector of arrival path l for user 0, built
// directly from the realization.
arma::cx_vec coefficient_vector(const ChannelRealization &real, const GroupLayout &layout, int l)
{
    int mb = layout.group_size();
    arma::cx_vec q(static_cast<arma::uword>(mb) * mb * layout.group_count, arma::fill::zeros);
    for (int g = 0; g < layout.group_count; ++g)
    {
        arma::cx_vec a = real.aod_steering.col(l).subvec(g * mb, (g + 1) * mb - 1);
        arma::cx_vec block(static_cast<arma::uword>(mb) * mb, arma::fill::zeros);
        for (arma::uword j = 0; j < real.user_gains[0].n_elem; ++j)
        {
            arma::cx_vec u = real.user_steering[0].col(j).subvec(g * mb, (g + 1) * mb - 1);
            block += std::conj(real.path_gains[l] * real.user_gains[0][j]) * arma::kron(arma::conj(u), a);
        }
        q.subvec(static_cast<arma::uword>(g) * mb * mb, static_cast<arma::uword>(g + 1) * mb * mb - 1) = block;
    }
    return q;
}

bool criterion_shift_identity(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int groups_cycle[4] = {1, 4, 9, 36};

    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        SystemConfig config;
        config.bs_shape = UpaShape{4, 4, 0.5};
        config.ris = make_group_layout(UpaShape{6, 6, 0.5}, groups_cycle[i % 4]);
        config.user_count = 1;
        config.bs_ris_paths = 2 + i % 3;
        config.user_ris_paths = {1 + i % 3};
        config.pilot_lengths = {8};
        config.noise_variance = 0.0;
        finalize(config);

        Rng rng(derive_seed(202, i, 0));
        ChannelRealization real = sample_realization(config, rng);

        int reference = i % config.bs_ris_paths;
        arma::cx_vec q_ref = coefficient_vector(real, config.ris, reference);
        for (int l = 0; l < config.bs_ris_paths; ++l)
        {
            SpatialFrequencyPair delta{real.ris_aod[l].vertical - real.ris_aod[reference].vertical,
                                       real.ris_aod[l].horizontal - real.ris_aod[reference].horizontal};
            cx ratio = std::conj(real.path_gains[l] / real.path_gains[reference]);
            arma::cx_vec predicted = ratio * apply_delta(q_ref, config.ris, delta);
            worst = std::max(worst, rel_error(predicted, coefficient_vector(real, config.ris, l)));
        }
    }

    double elapsed = seconds_since(start);
    detail = "100 realizations, max relative error " + fmt(worst) + ", " + fmt(elapsed) + "s";
    return worst < 1e-12 && elapsed < 5.0;
}

// --- C3 ------------------------------------------------------------------

bool criterion_factorization(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int groups_cycle[4] = {1, 4, 9, 36};

    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        SystemConfig config;
        config.bs_shape = UpaShape{4, 4, 0.5};
        config.ris = make_group_layout(UpaShape{6, 6, 0.5}, groups_cycle[i % 4]);
        config.user_count = 2;
        config.bs_ris_paths = 2 + i % 2;
        config.user_ris_paths = {1 + i % 3, 2};
        config.pilot_lengths = {8, 8};
        config.noise_variance = 0.0;
        finalize(config);

        Rng rng(derive_seed(303, i, 0));
        ChannelRealization real = sample_realization(config, rng);
        ScatteringMatrix scattering = random_unitary_scattering(config.ris, rng);
        int mb = config.ris.group_size();
        int user = i % 2;
        int reference = i % config.bs_ris_paths;
        cx scale(0.5 + (i % 5) * 0.3, 0.25 * (i % 3));

        std::vector<SpatialFrequencyPair> deltas;
        for (int l = 0; l < config.bs_ris_paths; ++l)
            deltas.push_back({real.ris_aod[l].vertical - real.ris_aod[reference].vertical,
                              real.ris_aod[l].horizontal - real.ris_aod[reference].horizontal});

        arma::cx_mat proxy =
            composite_channel(real.bs_steering, arma::cx_vec(scale * real.path_gains), config.ris, deltas);

        arma::cx_vec h = real.user_channel(user);
        arma::cx_vec v(static_cast<arma::uword>(mb) * config.ris.group_count);
        for (int g = 0; g < config.ris.group_count; ++g)
        {
            arma::uword lo = static_cast<arma::uword>(g) * mb;
            v.subvec(lo, lo + mb - 1) =
                arma::diagmat(arma::conj(arma::cx_vec(real.aod_steering.col(reference).subvec(lo, lo + mb - 1)))) *
                scattering.blocks[g] * h.subvec(lo, lo + mb - 1) / scale;
        }
        worst = std::max(worst, rel_error(proxy * v, cascaded_direct(real, scattering, user)));
    }

    double elapsed = seconds_since(start);
    detail = "100 instances incl. single-group and per-element layouts, max relative error " + fmt(worst) +
             ", " + fmt(elapsed) + "s";
    return worst < 1e-9 && elapsed < 10.0;
}

// --- C4 ------------------------------------------------------------------

bool criterion_noiseless_end_to_end(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();

    SystemConfig config;
    config.bs_shape = UpaShape{4, 4, 0.5};
    config.ris = make_group_layout(UpaShape{4, 4, 0.5}, 4);
    config.user_count = 3;
    config.bs_ris_paths = 2;
    config.user_ris_paths = {2, 2, 2};
    config.pilot_lengths = {48, 24, 24};
    config.noise_variance = 0.0;
    config.on_grid = true;
    finalize(config);

    double worst = 0.0;
    for (int t = 0; t < 5; ++t)
    {
        Rng rng(derive_seed(404, 0, t));
        TrialData data = synthesize_trial(config, rng);
        worst = std::max(worst, relative_error(estimate_proposed(config, data), data.true_channels));
    }

    double elapsed = seconds_since(start);
    detail = "5 draws, worst NMSE " + fmt(worst) + ", " + fmt(elapsed) + "s";
    return worst < 1e-6 && elapsed < 60.0;
}

// --- C5 ------------------------------------------------------------------

bool criterion_trends(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int trials = 50;

    std::vector<double> snr_means;
    for (double snr : {-10.0, -5.0, 0.0, 5.0, 10.0})
    {
        SystemConfig config = apply_sweep_value(desk_config(), SweepParameter::SnrDb, snr);
        finalize(config);
        snr_means.push_back(mean(paired_nmse(config, trials, 505, Estimator::Proposed)));
    }
    bool snr_decreasing = true;
    for (size_t i = 1; i < snr_means.size(); ++i)
        snr_decreasing = snr_decreasing && snr_means[i] < snr_means[i - 1];

    std::vector<double> pilot_means;
    for (double scale : {0.5, 1.0, 1.5, 2.0})
    {
        SystemConfig config = apply_sweep_value(desk_config(), SweepParameter::PilotScale, scale);
        finalize(config);
        pilot_means.push_back(mean(paired_nmse(config, trials, 506, Estimator::Proposed)));
    }
    bool pilot_non_increasing = true;
    for (size_t i = 1; i < pilot_means.size(); ++i)
        pilot_non_increasing = pilot_non_increasing && pilot_means[i] <= pilot_means[i - 1];

    double elapsed = seconds_since(start);
    std::ostringstream s;
    s << "snr means";
    for (double m : snr_means)
        s << " " << fmt(m);
    s << (snr_decreasing ? " (decreasing)" : " (NOT decreasing)") << "; pilot means";
    for (double m : pilot_means)
        s << " " << fmt(m);
    s << (pilot_non_increasing ? " (non-increasing)" : " (NOT non-increasing)") << ", " << fmt(elapsed) << "s";
    detail = s.str();
    return snr_decreasing && pilot_non_increasing && elapsed < 600.0;
}

// --- C6 ------------------------------------------------------------------

bool criterion_group_ordering(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int trials = 100;

    SystemConfig four = wide_config(4);
    SystemConfig nine = wide_config(9);
    finalize(four);
    finalize(nine);

    std::vector<double> nmse_four = paired_nmse(four, trials, 606, Estimator::Proposed);
    std::vector<double> nmse_nine = paired_nmse(nine, trials, 606, Estimator::Proposed);

    std::vector<double> diff(trials);
    for (int t = 0; t < trials; ++t)
        diff[t] = nmse_nine[t] - nmse_four[t];
    double t_statistic = mean(diff) / (sample_std(diff) / std::sqrt(static_cast<double>(trials)));

    double elapsed = seconds_since(start);
    std::ostringstream s;
    s << "mean NMSE " << fmt(mean(nmse_four)) << " (4 groups) vs " << fmt(mean(nmse_nine))
      << " (9 groups), paired t " << fmt(t_statistic) << " vs 1.6604, " << fmt(elapsed) << "s";
    detail = s.str();
    // One-sided paired t-test at the 5% level, 99 degrees of freedom.
    return mean(nmse_four) <= mean(nmse_nine) && t_statistic > 1.6604;
}

// --- C7 ------------------------------------------------------------------

bool criterion_baseline_separation(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int trials = 50;

    SystemConfig config = desk_config();
    config.pilot_lengths = {29, 11};
    finalize(config);

    std::vector<double> proposed, direct;
    for (int t = 0; t < trials; ++t)
    {
        TrialOutcome outcome =
            run_trial(config, {Estimator::Proposed, Estimator::DirectOmp}, derive_seed(707, 0, t));
        proposed.push_back(outcome.per_estimator[0].nmse);
        direct.push_back(outcome.per_estimator[1].nmse);
    }

    double elapsed = seconds_since(start);
    std::ostringstream s;
    s << "reduced budget (29, 11): proposed mean NMSE " << fmt(mean(proposed)) << " vs direct pursuit "
      << fmt(mean(direct)) << ", " << fmt(elapsed) << "s";
    detail = s.str();
    return mean(proposed) < mean(direct) && elapsed < 600.0;
}

// --- C8 ------------------------------------------------------------------

bool criterion_runtime_ordering(std::string &detail)
{
    auto start = std::chrono::steady_clock::now();
    const int trials = 10;

    std::ostringstream s;
    bool ordered = true;
    for (int elements : {16, 36})
    {
        SystemConfig config = elements == 16 ? desk_config() : wide_config(4);
        config.pilot_lengths = {48, 24};
        finalize(config);

        double proposed = 0.0, direct = 0.0;
        for (int t = 0; t < trials; ++t)
        {
            TrialOutcome outcome =
                run_trial(config, {Estimator::Proposed, Estimator::DirectOmp}, derive_seed(808, elements, t));
            proposed += outcome.per_estimator[0].seconds;
            direct += outcome.per_estimator[1].seconds;
        }
        proposed /= trials;
        direct /= trials;
        ordered = ordered && proposed < direct;
        s << elements << " elements: " << fmt(proposed) << "s vs " << fmt(direct) << "s; ";
    }

    s << fmt(seconds_since(start)) << "s total";
    detail = s.str();
    return ordered;
}

// --- C9 ------------------------------------------------------------------

bool criterion_unit_oracles(std::string &detail)
{
    std::ostringstream failures;

    // Greedy pursuit on an orthonormal dictionary is exact.
    {
        arma::cx_mat dictionary = dft_transform_matrix(UpaShape{8, 1, 0.5});
        arma::cx_vec y = cx(2.0, 1.0) * dictionary.col(1) + cx(0.0, -0.75) * dictionary.col(6);
        OmpOptions options;
        options.max_atoms = 2;
        SparseSolution fit = omp(dictionary, y, options);
        arma::uvec support = arma::sort(fit.support);
        bool ok = support.n_elem == 2 && support[0] == 1 && support[1] == 6 &&
                  fit.residual_norm < 1e-10 * arma::norm(y);
        if (!ok)
            failures << "[pursuit not exact] ";
    }

    // The projected power spectrum peaks exactly at on-grid bins.
    {
        UpaShape shape{8, 8, 0.5};
        arma::cx_mat pilot =
            2.0 * upa_response(shape, index_to_coarse_freq(7, shape)) *
                arma::cx_rowvec(8, arma::fill::ones) +
            upa_response(shape, index_to_coarse_freq(33, shape)) * arma::cx_rowvec(8, arma::fill::ones);
        Stage1Options options;
        options.known_count = 2;
        arma::uvec bins = dft_peak_detect(pilot, shape, options);
        if (!(bins.n_elem == 2 && bins[0] == 7 && bins[1] == 33))
            failures << "[peak bins not exact] ";
    }

    // Rotation refinement recovers a half-bin offset within one search step.
    {
        UpaShape shape{8, 8, 0.5};
        SpatialFrequencyPair truth{1.0 / 8 + 1.0 / 16, -2.0 / 8 + 1.0 / 16};
        Rng rng(910);
        arma::cx_rowvec excitation(12);
        for (arma::uword i = 0; i < excitation.n_elem; ++i)
            excitation[i] = rng.complex_gaussian(1.0);
        arma::cx_mat pilot = upa_response(shape, truth) * excitation;
        arma::uword bin = 1 * 8 + 6; // nearest lower bin of (1/8, -2/8)
        RotationSearchResult refined = angle_rotation_refine(pilot, shape, bin, 64, 64);
        double tol = 1.0 / (8 * 64) + 1e-12;
        if (!(std::abs(refined.refined.vertical - truth.vertical) <= tol &&
              std::abs(refined.refined.horizontal - truth.horizontal) <= tol))
            failures << "[rotation offset out of tolerance] ";
    }

    // The hierarchical pursuit selects the exact macro block and recovers
    // the atoms inside it.
    {
        Rng rng(911);
        std::vector<arma::cx_mat> blocks;
        for (int b = 0; b < 5; ++b)
        {
            arma::cx_mat block(24, 6);
            for (arma::uword i = 0; i < block.n_rows; ++i)
                for (arma::uword j = 0; j < block.n_cols; ++j)
                    block(i, j) = rng.complex_gaussian(1.0);
            blocks.push_back(block);
        }
        arma::cx_vec y = cx(1.5, -0.5) * blocks[3].col(2) + cx(-0.25, 2.0) * blocks[3].col(5);
        auto provider = [&](arma::uword b) { return blocks[b]; };
        BlockPursuitResult result = hierarchical_block_pursuit(provider, 5, y, 2);
        arma::uvec support = arma::sort(result.fit.support);
        bool ok = result.block == 3 && support.n_elem == 2 && support[0] == 2 && support[1] == 5 &&
                  result.fit.residual_norm < 1e-10 * arma::norm(y);
        if (!ok)
            failures << "[macro block not exact] ";
    }

    // The Bayesian evidence never decreases beyond numerical slack.
    {
        arma::cx_mat dictionary = dft_transform_matrix(UpaShape{8, 1, 0.5});
        Rng rng(912);
        arma::cx_vec y = cx(3.0, 0.0) * dictionary.col(2) + cx(0.0, -2.0) * dictionary.col(5);
        for (arma::uword i = 0; i < y.n_elem; ++i)
            y[i] += rng.complex_gaussian(1e-4);
        SblColumnResult fit = sbl_fit(dictionary, y, SblOptions{});
        bool monotone = fit.evidence.size() >= 1;
        for (size_t t = 1; t < fit.evidence.size(); ++t)
            monotone = monotone &&
                       fit.evidence[t] >= fit.evidence[t - 1] - 1e-6 * (1.0 + std::abs(fit.evidence[t - 1]));
        if (!monotone)
            failures << "[evidence not monotone] ";
    }

    std::string failed = failures.str();
    detail = failed.empty() ? "pursuit, peak bins, rotation, macro block, evidence all exact" : failed;
    return failed.empty();
}

// --- C10 -----------------------------------------------------------------

bool criterion_determinism(std::string &detail)
{
    SystemConfig base = desk_config();
    base.pilot_lengths = {16, 8};

    CampaignOptions options;
    options.estimators = {Estimator::Proposed, Estimator::DirectOmp};
    options.trials = 3;
    options.seed = 1010;
    options.record_timing = false;

    options.threads = 1;
    std::string serial = csv_string(run_campaign(base, SweepParameter::SnrDb, {0.0, 10.0}, options));
    std::string again = csv_string(run_campaign(base, SweepParameter::SnrDb, {0.0, 10.0}, options));
    options.threads = 2;
    std::string parallel = csv_string(run_campaign(base, SweepParameter::SnrDb, {0.0, 10.0}, options));

    if (serial != again || serial != parallel)
    {
        detail = "CSV outputs differ between identically seeded runs";
        return false;
    }

    // With timing enabled only the time column may move between re-runs.
    options.record_timing = true;
    options.threads = 1;
    std::vector<CampaignRow> timed_a = run_campaign(base, SweepParameter::SnrDb, {0.0, 10.0}, options);
    std::vector<CampaignRow> timed_b = run_campaign(base, SweepParameter::SnrDb, {0.0, 10.0}, options);
    if (timed_a.size() != timed_b.size())
    {
        detail = "timed re-run changed the row count";
        return false;
    }
    for (std::size_t r = 0; r < timed_a.size(); ++r)
        if (timed_a[r].value != timed_b[r].value || timed_a[r].estimator != timed_b[r].estimator ||
            timed_a[r].trials != timed_b[r].trials || timed_a[r].nmse_mean != timed_b[r].nmse_mean ||
            timed_a[r].nmse_std != timed_b[r].nmse_std)
        {
            detail = "timed re-run changed a non-time column";
            return false;
        }

    detail = "re-run and 2-thread CSV byte-identical; timed runs agree outside the time column";
    return true;
}

} // namespace

int main()
{
    std::vector<Criterion> criteria{
        {"C1: direct, vectorised and factored cascade forms agree", criterion_equivalence},
        {"C2: coefficient vectors differ by a frequency shift and a gain ratio", criterion_shift_identity},
        {"C3: every cascade factors through the composite channel proxy", criterion_factorization},
        {"C4: noiseless on-grid protocol is exact end to end", criterion_noiseless_end_to_end},
        {"C5: error falls with SNR and with pilot budget", criterion_trends},
        {"C6: four groups beat nine at matched budget", criterion_group_ordering},
        {"C7: staged protocol beats direct pursuit under a reduced budget", criterion_baseline_separation},
        {"C8: staged protocol runs faster than direct pursuit", criterion_runtime_ordering},
        {"C9: unit oracles hold under fixed seeds", criterion_unit_oracles},
        {"C10: identical seeds give bit-identical campaign CSV", criterion_determinism},
    };

    int failures = 0;
    for (Criterion &criterion : criteria)
    {
        std::string description;
        bool pass = false;
        try
        {
            pass = criterion.run(description);
        }
        catch (const std::exception &error)
        {
            description = std::string("exception: ") + error.what();
        }
        std::printf("[%s] %s (%s)\n", pass ? "PASS" : "FAIL", criterion.label.c_str(), description.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }

    if (failures > 0)
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
