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

#include "bdce/baselines.hpp"

#include "bdce/stage2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace bdce
{

namespace
{

arma::cx_vec solve_ls(const arma::cx_mat &columns, const arma::cx_vec &rhs)
{
    arma::cx_vec out;
    if (!arma::solve(out, columns, rhs, arma::solve_opts::no_approx))
        out = arma::pinv(columns) * rhs;
    return out;
}

} // namespace

DirectOmpResult direct_omp_estimate(const arma::cx_mat &pilot_block, double transmit_power,
                                    const TrainingSchedule &schedule, const AngularDictionary &bs_dict,
                                    const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                                    const DirectOmpOptions &options)
{
    if (options.sparsity < 1)
        throw std::invalid_argument("direct_omp_estimate: sparsity must be positive");
    if (!(transmit_power > 0.0))
        throw std::invalid_argument("direct_omp_estimate: transmit power must be positive");
    if (static_cast<arma::uword>(schedule.slot_count()) != pilot_block.n_cols)
        throw std::invalid_argument("direct_omp_estimate: schedule has " +
                                    std::to_string(schedule.slot_count()) + " slots, pilot block has " +
                                    std::to_string(pilot_block.n_cols) + " columns");
    if (pilot_block.n_rows != static_cast<arma::uword>(bs_dict.layout.element_count()))
        throw std::invalid_argument("direct_omp_estimate: pilot block rows do not match the "
                                    "station dictionary");

    arma::uword stations = pilot_block.n_rows;
    arma::uword slots = pilot_block.n_cols;
    arma::uword bs_atoms = bs_dict.atoms.n_cols;
    arma::uword ris_atoms = static_cast<arma::uword>(user_dict.column_count()) * aod_dict.column_count();
    arma::uword surface_len = static_cast<arma::uword>(schedule.layout.group_size()) *
                              schedule.layout.group_size() * schedule.layout.group_count;

    unsigned long long footprint =
        static_cast<unsigned long long>(bs_atoms) * ris_atoms * (stations + surface_len);
    if (footprint > options.memory_budget)
        throw std::runtime_error("direct_omp_estimate: atom grid needs " + std::to_string(footprint) +
                                 " sensing entries, budget is " + std::to_string(options.memory_budget));

    // Surface-side atoms enter only through their schedule projection, so a
    // single slots x ris_atoms matrix covers the whole correlation sweep.
    arma::cx_mat projected = equivalent_dictionary(schedule, user_dict, aod_dict);
    arma::vec projected_norms(ris_atoms);
    for (arma::uword c = 0; c < ris_atoms; ++c)
        projected_norms[c] = arma::norm(projected.col(c));

    double root_power = std::sqrt(transmit_power);
    arma::cx_vec observation = arma::vectorise(pilot_block);
    double observation_norm = arma::norm(observation);

    long long budget = options.sparsity;
    budget = std::min(budget, static_cast<long long>(bs_atoms) * static_cast<long long>(ris_atoms));
    budget = std::min(budget, static_cast<long long>(observation.n_elem));

    DirectOmpResult result;
    result.channel.zeros(stations, surface_len);
    if (observation_norm == 0.0)
        return result;

    std::vector<arma::uword> picked_bs, picked_ris;
    std::unordered_set<unsigned long long> picked_pairs;
    arma::cx_mat support_columns(observation.n_elem, 0);
    arma::cx_vec coefficients;
    arma::cx_mat residual_mat = pilot_block;

    for (long long iteration = 0; iteration < budget; ++iteration)
    {
        // One station-side projection per iteration, then stream the
        // surface atoms one station atom at a time.
        arma::cx_mat station_projected = bs_dict.atoms.t() * residual_mat; // bs_atoms x slots
        double best_score = 0.0;
        arma::uword best_bs = 0, best_ris = 0;
        bool found = false;
        for (arma::uword i = 0; i < bs_atoms; ++i)
        {
            arma::cx_rowvec row_scores = station_projected.row(i) * projected; // 1 x ris_atoms
            for (arma::uword c = 0; c < ris_atoms; ++c)
            {
                if (projected_norms[c] == 0.0)
                    continue;
                double score = std::abs(row_scores[c]) / projected_norms[c];
                if (score > best_score)
                {
                    unsigned long long key = static_cast<unsigned long long>(i) * ris_atoms + c;
                    if (picked_pairs.count(key))
                        continue;
                    best_score = score;
                    best_bs = i;
                    best_ris = c;
                    found = true;
                }
            }
        }
        if (!found || best_score == 0.0)
            break;

        picked_bs.push_back(best_bs);
        picked_ris.push_back(best_ris);
        picked_pairs.insert(static_cast<unsigned long long>(best_bs) * ris_atoms + best_ris);

        // Sensing column of the chosen pair: schedule projection of the
        // conjugated surface atom, spread over the station response.
        arma::cx_vec sensing =
            root_power * arma::kron(arma::conj(projected.col(best_ris)), bs_dict.atoms.col(best_bs));
        support_columns.insert_cols(support_columns.n_cols, sensing);

        coefficients = solve_ls(support_columns, observation);
        arma::cx_vec residual = observation - support_columns * coefficients;
        residual_mat = arma::reshape(residual, stations, slots);

        if (arma::norm(residual) <= 1e-13 * observation_norm)
            break;
    }

    result.bs_support = arma::uvec(picked_bs);
    result.ris_support = arma::uvec(picked_ris);
    result.coefficients = coefficients;
    result.residual_norm = arma::norm(arma::vectorise(residual_mat));
    for (std::size_t s = 0; s < picked_bs.size(); ++s)
    {
        arma::cx_vec surface_atom = arma::conj(composite_atom(user_dict, aod_dict, picked_ris[s]));
        result.channel += coefficients[s] * bs_dict.atoms.col(picked_bs[s]) * surface_atom.st();
    }
    return result;
}

SblColumnResult sbl_fit(const arma::cx_mat &dictionary, const arma::cx_vec &measurement,
                        const SblOptions &options)
{
    if (dictionary.n_rows != measurement.n_elem || dictionary.n_cols == 0)
        throw std::invalid_argument("sbl_fit: dictionary and measurement sizes do not match");
    if (options.max_iterations < 1)
        throw std::invalid_argument("sbl_fit: iteration budget must be positive");

    arma::uword samples = measurement.n_elem;
    arma::uword atoms = dictionary.n_cols;

    SblColumnResult result;
    result.weights.zeros(atoms);
    result.atom_scales.zeros(atoms);

    double signal = std::real(arma::cdot(measurement, measurement));
    double noise = std::max(1e-12, 0.1 * signal / static_cast<double>(samples));
    if (signal == 0.0)
    {
        result.noise_variance = noise;
        return result;
    }

    // Active-set bookkeeping: scales of dropped atoms stay at zero.
    arma::uvec active = arma::regspace<arma::uvec>(0, atoms - 1);
    arma::cx_mat phi = dictionary;
    arma::vec scales(atoms, arma::fill::ones);

    arma::cx_vec mean;
    for (int iteration = 0; iteration < options.max_iterations; ++iteration)
    {
        arma::cx_mat weighted = phi;
        weighted.each_row() %= arma::conv_to<arma::cx_rowvec>::from(scales.t());
        arma::cx_mat prior_cov = weighted * phi.t(); // samples x samples
        arma::cx_mat cov = prior_cov;
        cov.diag() += noise;

        arma::cx_vec cov_inv_y;
        arma::cx_mat cov_inv_phi;
        if (!arma::solve(cov_inv_y, cov, measurement, arma::solve_opts::no_approx) ||
            !arma::solve(cov_inv_phi, cov, phi, arma::solve_opts::no_approx))
        {
            arma::cx_mat pinv_cov = arma::pinv(cov);
            cov_inv_y = pinv_cov * measurement;
            cov_inv_phi = pinv_cov * phi;
        }

        mean = arma::conv_to<arma::cx_vec>::from(scales) % (phi.t() * cov_inv_y);
        arma::vec sensitivities = arma::real(arma::sum(arma::conj(phi) % cov_inv_phi, 0)).t();
        arma::vec posterior_var = scales - arma::square(scales) % sensitivities;

        double log_det = 0.0;
        try
        {
            log_det = arma::log_det_sympd(cov);
        }
        catch (const std::exception &)
        {
            cx value = arma::log_det(cov);
            log_det = std::real(value);
        }
        result.evidence.push_back(-log_det - std::real(arma::cdot(measurement, cov_inv_y)));
        result.iterations = iteration + 1;

        arma::vec new_scales = arma::square(arma::abs(mean)) + arma::clamp(posterior_var, 0.0, arma::datum::inf);

        arma::cx_vec fitted = phi * mean;
        arma::cx_vec residual = measurement - fitted;
        arma::cx_mat cov_inv_prior;
        if (!arma::solve(cov_inv_prior, cov, prior_cov, arma::solve_opts::no_approx))
            cov_inv_prior = arma::pinv(cov) * prior_cov;
        double smearing = std::real(arma::trace(prior_cov)) -
                          std::real(arma::trace(prior_cov * cov_inv_prior));
        double new_noise =
            std::max(1e-12, (std::real(arma::cdot(residual, residual)) + std::max(0.0, smearing)) /
                                static_cast<double>(samples));

        double drift = arma::abs(new_scales - scales).max();
        double magnitude = std::max(new_scales.max(), 1e-30);
        scales = new_scales;
        noise = new_noise;

        if (options.prune_threshold > 0.0)
        {
            double cutoff = options.prune_threshold * scales.max();
            arma::uvec keep = arma::find(scales >= cutoff);
            if (keep.n_elem > 0 && keep.n_elem < scales.n_elem)
            {
                active = active.elem(keep);
                phi = phi.cols(keep);
                scales = scales.elem(keep);
                mean = mean.elem(keep);
            }
        }

        if (drift / magnitude <= options.tolerance)
            break;
    }

    for (arma::uword i = 0; i < active.n_elem; ++i)
    {
        result.weights[active[i]] = mean[i];
        result.atom_scales[active[i]] = scales[i];
    }
    result.noise_variance = noise;
    return result;
}

SblResult sbl_estimate(const arma::cx_mat &pilot_block, double transmit_power,
                       const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                       const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                       const SblOptions &options)
{
    if (static_cast<arma::uword>(schedule.slot_count()) != pilot_block.n_cols)
        throw std::invalid_argument("sbl_estimate: schedule has " + std::to_string(schedule.slot_count()) +
                                    " slots, pilot block has " + std::to_string(pilot_block.n_cols) +
                                    " columns");

    arma::cx_mat measurements = equivalent_measurements(pilot_block, transmit_power, bs_steering);
    arma::cx_mat dictionary = equivalent_dictionary(schedule, user_dict, aod_dict);

    arma::uword surface_len = static_cast<arma::uword>(schedule.layout.group_size()) *
                              schedule.layout.group_size() * schedule.layout.group_count;

    SblResult result;
    arma::cx_mat coefficient_vectors(surface_len, measurements.n_cols, arma::fill::zeros);
    for (arma::uword l = 0; l < measurements.n_cols; ++l)
    {
        SblColumnResult column = sbl_fit(dictionary, measurements.col(l), options);
        for (arma::uword i = 0; i < column.weights.n_elem; ++i)
            if (column.weights[i] != cx(0.0))
                coefficient_vectors.col(l) += column.weights[i] * composite_atom(user_dict, aod_dict, i);
        result.columns.push_back(std::move(column));
    }
    result.channel = bs_steering * coefficient_vectors.t();
    return result;
}

} // namespace bdce
