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

#include "bdce/stage3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bdce
{

arma::cx_vec shared_path_scales(const Stage2Result &reference)
{
    if (reference.gain_ratios.is_empty())
        throw std::invalid_argument("shared_path_scales: reference carries no paths");
    return std::conj(reference.reference_coefficient) * reference.gain_ratios;
}

arma::cx_mat composite_channel(const arma::cx_mat &bs_steering, const arma::cx_vec &path_scales,
                               const GroupLayout &layout,
                               const std::vector<SpatialFrequencyPair> &deltas)
{
    if (bs_steering.n_cols != path_scales.n_elem || bs_steering.n_cols != deltas.size())
        throw std::invalid_argument("composite_channel: path count mismatch");
    arma::cx_mat offset_responses(static_cast<arma::uword>(layout.element_count()), deltas.size());
    for (arma::uword l = 0; l < deltas.size(); ++l)
        offset_responses.col(l) = rearranged_upa_response(layout, deltas[l]);
    return bs_steering * arma::diagmat(path_scales) * offset_responses.t();
}

arma::cx_vec swap_kron_factors(const arma::cx_vec &stacked, const GroupLayout &layout)
{
    int mb = layout.group_size();
    int groups = layout.group_count;
    if (stacked.n_elem != static_cast<arma::uword>(mb) * mb * groups)
        throw std::invalid_argument("swap_kron_factors: vector length mismatch");
    arma::cx_vec out(stacked.n_elem);
    for (int g = 0; g < groups; ++g)
    {
        arma::uword base = static_cast<arma::uword>(g) * mb * mb;
        arma::cx_mat block =
            arma::reshape(stacked.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1), mb, mb);
        out.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1) = arma::vectorise(block.st());
    }
    return out;
}

BlockPursuitResult hierarchical_block_pursuit(const std::function<arma::cx_mat(arma::uword)> &block,
                                              arma::uword block_count, const arma::cx_vec &measurement,
                                              int sparsity)
{
    if (!block)
        throw std::invalid_argument("hierarchical_block_pursuit: missing block provider");
    if (block_count == 0)
        throw std::invalid_argument("hierarchical_block_pursuit: no blocks");
    if (sparsity < 1)
        throw std::invalid_argument("hierarchical_block_pursuit: sparsity must be positive");

    double stop = 1e-12 * arma::norm(measurement);
    bool found = false;
    BlockPursuitResult out;
    for (arma::uword j = 0; j < block_count; ++j)
    {
        arma::cx_mat candidate = block(j);
        if (candidate.n_rows != measurement.n_elem)
            throw std::invalid_argument("hierarchical_block_pursuit: block " + std::to_string(j) +
                                        " has " + std::to_string(candidate.n_rows) + " rows, measurement has " +
                                        std::to_string(measurement.n_elem));

        arma::uvec usable(candidate.n_cols);
        arma::uword usable_count = 0;
        for (arma::uword c = 0; c < candidate.n_cols; ++c)
            if (arma::norm(candidate.col(c)) > 0.0)
                usable[usable_count++] = c;
        if (usable_count == 0)
            continue;
        usable.resize(usable_count);

        int budget =
            static_cast<int>(std::min<arma::uword>(2 * static_cast<arma::uword>(sparsity), usable_count));
        SparseSolution fit = omp(candidate.cols(usable), measurement, OmpOptions{budget, stop});
        if (!found || fit.residual_norm < out.fit.residual_norm)
        {
            found = true;
            out.block = j;
            out.fit = std::move(fit);
            for (arma::uword s = 0; s < out.fit.support.n_elem; ++s)
                out.fit.support[s] = usable[out.fit.support[s]];
        }
    }
    if (!found)
        throw std::invalid_argument("hierarchical_block_pursuit: no block has usable columns");
    return out;
}

Stage3Result estimate_other_user(const arma::cx_mat &pilot_block, double transmit_power,
                                 const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                                 const AngularDictionary &intra_dict, const Stage2Result &reference,
                                 const Stage3Options &options)
{
    if (options.user_sparsity < 1)
        throw std::invalid_argument("estimate_other_user: user sparsity must be positive");
    if (static_cast<arma::uword>(schedule.slot_count()) != pilot_block.n_cols)
        throw std::invalid_argument("estimate_other_user: schedule has " +
                                    std::to_string(schedule.slot_count()) + " slots, pilot block has " +
                                    std::to_string(pilot_block.n_cols) + " columns");
    if (!same_layout(schedule.layout, intra_dict.layout))
        throw std::invalid_argument("estimate_other_user: schedule and dictionary describe "
                                    "different surfaces");
    if (reference.gain_ratios.n_elem != bs_steering.n_cols ||
        reference.deltas.size() != bs_steering.n_cols)
        throw std::invalid_argument("estimate_other_user: reference path count mismatch");

    const GroupLayout &layout = schedule.layout;
    int mb = layout.group_size();
    int groups = layout.group_count;
    arma::uword slots = pilot_block.n_cols;
    arma::uword paths = bs_steering.n_cols;
    arma::uword intra_cols = intra_dict.column_count();

    int macro_v = options.macro_grid_v > 0 ? options.macro_grid_v : 2 * layout.shape.vertical;
    int macro_h = options.macro_grid_h > 0 ? options.macro_grid_h : 2 * layout.shape.horizontal;

    arma::cx_vec scales = shared_path_scales(reference);
    arma::cx_mat proxy = composite_channel(bs_steering, scales, layout, reference.deltas);
    double n = static_cast<double>(bs_steering.n_rows);
    arma::cx_mat projected_proxy = (1.0 / (n * std::sqrt(transmit_power))) * bs_steering.t() * proxy;

    // Stacked measurement: projected pilot block flattened slot-major, with
    // the power normalisation chosen so the final scaling below restores the
    // channel exactly when everything else is exact.
    arma::cx_mat measurements = equivalent_measurements(pilot_block, transmit_power, bs_steering);
    arma::cx_vec stacked = arma::vectorise(measurements.t()) / transmit_power;

    // Per slot and group: scattering block times the intra-dictionary group
    // rows. Shared by every coarse hypothesis, so built once.
    std::vector<std::vector<arma::cx_mat>> projected_slots(slots);
    for (arma::uword t = 0; t < slots; ++t)
    {
        projected_slots[t].resize(groups);
        for (int g = 0; g < groups; ++g)
            projected_slots[t][g] = schedule.slot_block(static_cast<int>(t), g) * intra_dict.group_rows(g);
    }

    double spacing = layout.shape.spacing;
    auto macro_pair = [&](arma::uword j) {
        arma::uword a = j / macro_h, b = j % macro_h;
        return SpatialFrequencyPair{(-1.0 + 2.0 * static_cast<double>(a) / macro_v) * spacing,
                                    (-1.0 + 2.0 * static_cast<double>(b) / macro_h) * spacing};
    };

    auto provider = [&](arma::uword j) {
        arma::cx_vec coarse = rearranged_upa_response(layout, macro_pair(j));
        arma::cx_mat block(slots * paths, intra_cols, arma::fill::zeros);
        for (arma::uword t = 0; t < slots; ++t)
        {
            arma::cx_mat rows(paths, intra_cols, arma::fill::zeros);
            for (int g = 0; g < groups; ++g)
            {
                arma::cx_mat shifted = projected_proxy.cols(static_cast<arma::uword>(g) * mb,
                                                            static_cast<arma::uword>(g) * mb + mb - 1);
                shifted.each_row() %= coarse.subvec(static_cast<arma::uword>(g) * mb,
                                                    static_cast<arma::uword>(g) * mb + mb - 1)
                                          .st();
                rows += shifted * projected_slots[t][g];
            }
            block.rows(t * paths, t * paths + paths - 1) = rows;
        }
        return block;
    };

    BlockPursuitResult pursuit = hierarchical_block_pursuit(
        provider, static_cast<arma::uword>(macro_v) * macro_h, stacked, options.user_sparsity);

    Stage3Result result;
    result.macro_index = pursuit.block;
    result.macro_pair = macro_pair(pursuit.block);
    result.intra_fit = pursuit.fit;
    for (arma::uword s = 0; s < pursuit.fit.support.n_elem; ++s)
        result.user_frequencies.push_back(intra_dict.grid[pursuit.fit.support[s]]);

    // Reassemble the per-user composite vector from the selected coarse
    // response and the fitted user-side combination, then spread it across
    // the arrival paths through the stage-two offsets and scales.
    arma::cx_vec coarse = rearranged_upa_response(layout, result.macro_pair);
    arma::cx_vec user_mix(static_cast<arma::uword>(layout.element_count()), arma::fill::zeros);
    for (arma::uword s = 0; s < pursuit.fit.support.n_elem; ++s)
        user_mix += pursuit.fit.coefficients[s] * intra_dict.atoms.col(pursuit.fit.support[s]);

    arma::cx_vec stacked_pair(static_cast<arma::uword>(mb) * mb * groups);
    for (int g = 0; g < groups; ++g)
    {
        arma::uword base = static_cast<arma::uword>(g) * mb * mb;
        stacked_pair.subvec(base, base + static_cast<arma::uword>(mb) * mb - 1) =
            arma::kron(coarse.subvec(static_cast<arma::uword>(g) * mb, static_cast<arma::uword>(g) * mb + mb - 1),
                       user_mix.subvec(static_cast<arma::uword>(g) * mb,
                                       static_cast<arma::uword>(g) * mb + mb - 1));
    }
    arma::cx_vec user_composite = arma::conj(swap_kron_factors(stacked_pair, layout));

    result.coefficient_vectors.set_size(stacked_pair.n_elem, paths);
    for (arma::uword l = 0; l < paths; ++l)
        result.coefficient_vectors.col(l) =
            std::conj(scales[l]) * apply_delta(user_composite, layout, reference.deltas[l]);

    result.channel = std::sqrt(transmit_power) * bs_steering * result.coefficient_vectors.t();
    return result;
}

} // namespace bdce
