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

#include "bdce/stage2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bdce
{

arma::cx_mat equivalent_measurements(const arma::cx_mat &pilot_block, double transmit_power,
                                     const arma::cx_mat &bs_steering)
{
    if (pilot_block.n_rows == 0 || pilot_block.n_cols == 0)
        throw std::invalid_argument("equivalent_measurements: empty pilot block");
    if (bs_steering.n_rows != pilot_block.n_rows || bs_steering.n_cols == 0)
        throw std::invalid_argument("equivalent_measurements: steering matrix has " +
                                    std::to_string(bs_steering.n_rows) + " rows, pilot block has " +
                                    std::to_string(pilot_block.n_rows));
    if (!(transmit_power > 0.0))
        throw std::invalid_argument("equivalent_measurements: transmit power must be positive");
    double scale = 1.0 / (static_cast<double>(pilot_block.n_rows) * std::sqrt(transmit_power));
    return (scale * bs_steering.t() * pilot_block).t();
}

namespace
{

void require_matching_dictionaries(const AngularDictionary &user_dict, const AngularDictionary &aod_dict)
{
    if (!same_layout(user_dict.layout, aod_dict.layout))
        throw std::invalid_argument("composite dictionary: user and departure dictionaries "
                                    "describe different surfaces");
}

} // namespace

arma::cx_vec composite_atom(const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                            arma::uword column)
{
    require_matching_dictionaries(user_dict, aod_dict);
    arma::uword d2 = aod_dict.column_count();
    if (column >= static_cast<arma::uword>(user_dict.column_count()) * d2)
        throw std::invalid_argument("composite_atom: column out of range");
    arma::uword c_user = column / d2;
    arma::uword c_aod = column % d2;

    int mb = user_dict.layout.group_size();
    int groups = user_dict.layout.group_count;
    arma::cx_vec atom(static_cast<arma::uword>(mb) * mb * groups);
    for (int g = 0; g < groups; ++g)
    {
        arma::uword base = static_cast<arma::uword>(g) * mb * mb;
        atom.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1) =
            arma::kron(arma::conj(user_dict.group_rows(g).col(c_user)), aod_dict.group_rows(g).col(c_aod));
    }
    return atom;
}

arma::cx_mat equivalent_dictionary(const TrainingSchedule &schedule, const AngularDictionary &user_dict,
                                   const AngularDictionary &aod_dict)
{
    require_matching_dictionaries(user_dict, aod_dict);
    if (!same_layout(schedule.layout, user_dict.layout))
        throw std::invalid_argument("equivalent_dictionary: schedule and dictionaries "
                                    "describe different surfaces");
    if (schedule.slot_count() < 1)
        throw std::invalid_argument("equivalent_dictionary: schedule has no slots");

    int mb = user_dict.layout.group_size();
    int groups = user_dict.layout.group_count;
    arma::uword slots = schedule.slot_count();
    arma::uword d1 = user_dict.column_count();
    arma::uword d2 = aod_dict.column_count();

    // One pass per (group, group row): project the departure atoms of that
    // row through the schedule, then spread the result over the user columns.
    arma::cx_mat adjoint = schedule.complex_entries().t(); // slots x (mb^2 * groups)
    arma::cx_mat out(slots, d1 * d2, arma::fill::zeros);
    for (int g = 0; g < groups; ++g)
    {
        arma::cx_mat user_rows = user_dict.group_rows(g); // mb x d1
        arma::cx_mat aod_rows = aod_dict.group_rows(g);   // mb x d2
        for (int i = 0; i < mb; ++i)
        {
            arma::uword base = static_cast<arma::uword>(g) * mb * mb + static_cast<arma::uword>(i) * mb;
            arma::cx_mat projected = adjoint.cols(base, base + mb - 1) * aod_rows; // slots x d2
            for (arma::uword c1 = 0; c1 < d1; ++c1)
                out.cols(c1 * d2, c1 * d2 + d2 - 1) += std::conj(user_rows(i, c1)) * projected;
        }
    }
    return out;
}

arma::cx_vec apply_delta(const arma::cx_vec &coefficients, const GroupLayout &layout,
                         const SpatialFrequencyPair &delta)
{
    int mb = layout.group_size();
    int groups = layout.group_count;
    if (coefficients.n_elem != static_cast<arma::uword>(mb) * mb * groups)
        throw std::invalid_argument("apply_delta: coefficient vector length mismatch");

    arma::cx_vec shift = rearranged_upa_response(layout, delta);
    arma::cx_vec out(coefficients.n_elem);
    for (int g = 0; g < groups; ++g)
    {
        arma::uword base = static_cast<arma::uword>(g) * mb * mb;
        arma::cx_mat block = arma::reshape(coefficients.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1),
                                           mb, mb);
        block.each_col() %= shift.subvec(static_cast<arma::uword>(g) * mb,
                                         static_cast<arma::uword>(g) * mb + mb - 1);
        out.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1) = arma::vectorise(block);
    }
    return out;
}

Stage2Result estimate_typical_user(const arma::cx_mat &pilot_block, double transmit_power,
                                   const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                                   const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                                   const Stage2Options &options)
{
    if (options.user_sparsity < 1)
        throw std::invalid_argument("estimate_typical_user: user sparsity must be positive");
    if (static_cast<arma::uword>(schedule.slot_count()) != pilot_block.n_cols)
        throw std::invalid_argument("estimate_typical_user: schedule has " +
                                    std::to_string(schedule.slot_count()) + " slots, pilot block has " +
                                    std::to_string(pilot_block.n_cols) + " columns");

    const GroupLayout &layout = schedule.layout;
    int grid_v = options.delta_grid_v > 0 ? options.delta_grid_v : 8 * layout.shape.vertical;
    int grid_h = options.delta_grid_h > 0 ? options.delta_grid_h : 8 * layout.shape.horizontal;

    arma::cx_mat measurements = equivalent_measurements(pilot_block, transmit_power, bs_steering);
    arma::uword paths = measurements.n_cols;

    Stage2Result result;
    arma::vec column_norms(paths);
    for (arma::uword l = 0; l < paths; ++l)
        column_norms[l] = arma::norm(measurements.col(l));
    result.reference_column = argmax_abs(column_norms);

    // Greedy fit of the reference column alone; its support carries both the
    // user-side directions (shared by every column) and the reference
    // departure direction. The budget doubles the nominal sparsity because
    // neighbouring composite columns are coherent and a bracketing first pick
    // would otherwise miss an exact representation; the threshold stops the
    // pursuit early once the fit is tight.
    arma::cx_mat dictionary = equivalent_dictionary(schedule, user_dict, aod_dict);
    arma::cx_vec reference_column(measurements.col(result.reference_column));
    int budget = static_cast<int>(
        std::min<arma::uword>(2 * static_cast<arma::uword>(options.user_sparsity), dictionary.n_cols));
    result.reference_fit =
        omp(dictionary, reference_column, OmpOptions{budget, 1e-12 * arma::norm(reference_column)});
    if (result.reference_fit.support.is_empty())
        throw std::runtime_error("estimate_typical_user: reference column is zero");

    arma::uword d2 = aod_dict.column_count();
    arma::uword strongest = argmax_abs(result.reference_fit.coefficients);
    result.reference_coefficient = result.reference_fit.coefficients[strongest];
    result.reference_aod = aod_dict.grid[result.reference_fit.support[strongest] % d2];
    for (arma::uword s = 0; s < result.reference_fit.support.n_elem; ++s)
        result.user_frequencies.push_back(user_dict.grid[result.reference_fit.support[s] / d2]);

    arma::uword coefficient_length =
        static_cast<arma::uword>(layout.group_size()) * layout.group_size() * layout.group_count;
    arma::cx_vec reference_vector(coefficient_length, arma::fill::zeros);
    for (arma::uword s = 0; s < result.reference_fit.support.n_elem; ++s)
        reference_vector += result.reference_fit.coefficients[s] *
                            composite_atom(user_dict, aod_dict, result.reference_fit.support[s]);

    arma::cx_mat adjoint = schedule.complex_entries().t(); // slots x coefficient length
    double spacing = layout.shape.spacing;
    double step_v = 4.0 * spacing / grid_v;
    double step_h = 4.0 * spacing / grid_h;

    result.deltas.assign(paths, SpatialFrequencyPair{0.0, 0.0});
    result.gain_ratios.set_size(paths);
    result.coefficient_vectors.set_size(reference_vector.n_elem, paths);

    for (arma::uword l = 0; l < paths; ++l)
    {
        if (l == result.reference_column)
        {
            result.gain_ratios[l] = 1.0;
            result.coefficient_vectors.col(l) = reference_vector;
            continue;
        }

        // Every departure direction is the reference one shifted by some
        // offset, so a 2-D correlation search over offsets plus one scalar
        // fit pins the whole column. The correlation must be normalised:
        // the schedule projection is not unitary, so prediction norms vary
        // across offsets and the raw inner product peaks off target.
        double best_value = -1.0;
        SpatialFrequencyPair best_delta{0.0, 0.0};
        arma::cx_vec best_shifted;
        for (int i = 0; i < grid_v; ++i)
            for (int j = 0; j < grid_h; ++j)
            {
                SpatialFrequencyPair delta{-2.0 * spacing + i * step_v, -2.0 * spacing + j * step_h};
                arma::cx_vec shifted = apply_delta(reference_vector, layout, delta);
                arma::cx_vec prediction = adjoint * shifted;
                double nrm = arma::norm(prediction);
                if (nrm == 0.0)
                    continue;
                double value = std::abs(arma::cdot(measurements.col(l), prediction)) / nrm;
                if (value > best_value)
                {
                    best_value = value;
                    best_delta = delta;
                    best_shifted = shifted;
                }
            }
        if (best_value < 0.0)
            throw std::runtime_error("estimate_typical_user: every offset prediction vanished");

        arma::cx_vec prediction = adjoint * best_shifted;
        double energy = std::real(arma::cdot(prediction, prediction));
        cx coefficient = energy > 0.0 ? arma::cdot(prediction, measurements.col(l)) / energy : cx(0.0);

        result.deltas[l] = best_delta;
        result.gain_ratios[l] = std::conj(coefficient);
        result.coefficient_vectors.col(l) = coefficient * best_shifted;
    }

    result.channel = bs_steering * result.coefficient_vectors.t();
    return result;
}

} // namespace bdce
