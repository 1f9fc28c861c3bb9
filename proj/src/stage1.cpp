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

#include "bdce/stage1.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bdce
{

arma::vec dft_row_powers(const arma::cx_mat &pilot_block, const UpaShape &shape)
{
    validate(shape);
    if (pilot_block.n_rows != static_cast<arma::uword>(shape.count()))
        throw std::invalid_argument("dft_row_powers: pilot block has " + std::to_string(pilot_block.n_rows) +
                                    " rows, array has " + std::to_string(shape.count()) + " elements");
    if (pilot_block.n_cols == 0)
        throw std::invalid_argument("dft_row_powers: pilot block has no columns");
    arma::cx_mat projected = dft_transform_matrix(shape).t() * pilot_block;
    return arma::sum(arma::square(arma::abs(projected)), 1);
}

arma::uvec dft_peak_detect(const arma::cx_mat &pilot_block, const UpaShape &shape,
                           const Stage1Options &options)
{
    arma::vec powers = dft_row_powers(pilot_block, shape);
    double peak_power = powers.max();
    if (!(peak_power > 0.0))
        throw std::invalid_argument("dft_peak_detect: pilot block is identically zero");

    auto stronger = [&powers](arma::uword a, arma::uword b) {
        return powers[a] != powers[b] ? powers[a] > powers[b] : a < b;
    };

    std::vector<arma::uword> picked;
    if (options.known_count > 0)
    {
        if (options.known_count > shape.count())
            throw std::invalid_argument("dft_peak_detect: requested " + std::to_string(options.known_count) +
                                        " peaks from " + std::to_string(shape.count()) + " bins");
        std::vector<arma::uword> order(powers.n_elem);
        std::iota(order.begin(), order.end(), arma::uword(0));
        std::sort(order.begin(), order.end(), stronger);
        picked.assign(order.begin(), order.begin() + options.known_count);
    }
    else
    {
        if (!(options.relative_threshold > 0.0) || options.relative_threshold > 1.0)
            throw std::invalid_argument("dft_peak_detect: relative threshold must lie in (0, 1]");
        int nv = shape.vertical, nh = shape.horizontal;
        for (arma::uword i = 0; i < powers.n_elem; ++i)
        {
            if (powers[i] < options.relative_threshold * peak_power)
                continue;
            // Keep only wrap-around local maxima so the sidelobe skirt of a
            // strong off-grid path cannot masquerade as a second path.
            // Exact ties between neighbours keep the lower bin index.
            int v = static_cast<int>(i) / nh, h = static_cast<int>(i) % nh;
            bool dominant = true;
            for (int dv = -1; dv <= 1 && dominant; ++dv)
                for (int dh = -1; dh <= 1 && dominant; ++dh)
                {
                    if (dv == 0 && dh == 0)
                        continue;
                    arma::uword j = static_cast<arma::uword>((v + dv + nv) % nv) * nh + (h + dh + nh) % nh;
                    if (j == i)
                        continue;
                    if (powers[j] > powers[i] || (powers[j] == powers[i] && j < i))
                        dominant = false;
                }
            if (dominant)
                picked.push_back(i);
        }
        std::sort(picked.begin(), picked.end(), stronger);
    }
    return arma::uvec(picked);
}

SpatialFrequencyPair index_to_coarse_freq(arma::uword bin, const UpaShape &shape)
{
    validate(shape);
    if (bin >= static_cast<arma::uword>(shape.count()))
        throw std::invalid_argument("index_to_coarse_freq: bin " + std::to_string(bin) + " out of range");
    arma::uword slow = bin / shape.horizontal;
    arma::uword fast = bin % shape.horizontal;
    return {wrap_frequency(static_cast<double>(slow) / shape.vertical),
            wrap_frequency(static_cast<double>(fast) / shape.horizontal)};
}

namespace
{

// Best rotation for one axis: scans delta over the half-open grid covering
// [-pi/n, pi/n) and scores the matched filter at frequency bin/n - delta/(2 pi)
// against the sub-array block where the other axis contributes no phase.
double search_axis_rotation(const arma::cx_mat &sub, int n, arma::uword bin, int grid_points)
{
    double best_value = -1.0;
    double best_delta = 0.0;
    double step = (2.0 * pi / n) / grid_points;
    for (int i = 0; i < grid_points; ++i)
    {
        double delta = -pi / n + i * step;
        double freq = static_cast<double>(bin) / n - delta / (2.0 * pi);
        arma::cx_rowvec z = steering_vector(n, freq).t() * sub;
        double value = arma::accu(arma::square(arma::abs(z)));
        if (value > best_value)
        {
            best_value = value;
            best_delta = delta;
        }
    }
    return best_delta;
}

} // namespace

RotationSearchResult angle_rotation_refine(const arma::cx_mat &pilot_block, const UpaShape &shape,
                                           arma::uword bin, int grid_1, int grid_2)
{
    validate(shape);
    if (pilot_block.n_rows != static_cast<arma::uword>(shape.count()) || pilot_block.n_cols == 0)
        throw std::invalid_argument("angle_rotation_refine: pilot block shape mismatch");
    if (bin >= static_cast<arma::uword>(shape.count()))
        throw std::invalid_argument("angle_rotation_refine: bin out of range");
    if (grid_1 < 1 || grid_2 < 1)
        throw std::invalid_argument("angle_rotation_refine: rotation grids must be positive");

    int nv = shape.vertical, nh = shape.horizontal;
    arma::uword bin_v = bin / nh, bin_h = bin % nh;

    // Elements with horizontal index 0 see only the vertical phase ramp and
    // vice versa, so each axis reduces to a 1-D line search.
    arma::uvec vertical_rows(nv);
    for (int i = 0; i < nv; ++i)
        vertical_rows[i] = static_cast<arma::uword>(i) * nh;
    arma::cx_mat vertical_sub = pilot_block.rows(vertical_rows);
    arma::cx_mat horizontal_sub = pilot_block.rows(0, nh - 1);

    RotationSearchResult result;
    result.vertical_offset = search_axis_rotation(vertical_sub, nv, bin_v, grid_1);
    result.horizontal_offset = search_axis_rotation(horizontal_sub, nh, bin_h, grid_2);
    result.objective_evaluations = grid_1 + grid_2;
    result.refined.vertical =
        wrap_frequency(static_cast<double>(bin_v) / nv - result.vertical_offset / (2.0 * pi));
    result.refined.horizontal =
        wrap_frequency(static_cast<double>(bin_h) / nh - result.horizontal_offset / (2.0 * pi));
    return result;
}

SpatialFrequencyPair rotation_refine_joint(const arma::cx_mat &pilot_block, const UpaShape &shape,
                                           arma::uword bin, int grid_1, int grid_2)
{
    validate(shape);
    if (pilot_block.n_rows != static_cast<arma::uword>(shape.count()) || pilot_block.n_cols == 0)
        throw std::invalid_argument("rotation_refine_joint: pilot block shape mismatch");
    if (bin >= static_cast<arma::uword>(shape.count()))
        throw std::invalid_argument("rotation_refine_joint: bin out of range");
    if (grid_1 < 1 || grid_2 < 1)
        throw std::invalid_argument("rotation_refine_joint: rotation grids must be positive");

    int nv = shape.vertical, nh = shape.horizontal;
    arma::uword bin_v = bin / nh, bin_h = bin % nh;
    double step_v = (2.0 * pi / nv) / grid_1;
    double step_h = (2.0 * pi / nh) / grid_2;

    double best_value = -1.0;
    SpatialFrequencyPair best{0.0, 0.0};
    for (int i = 0; i < grid_1; ++i)
        for (int j = 0; j < grid_2; ++j)
        {
            double delta_v = -pi / nv + i * step_v;
            double delta_h = -pi / nh + j * step_h;
            SpatialFrequencyPair cand{static_cast<double>(bin_v) / nv - delta_v / (2.0 * pi),
                                      static_cast<double>(bin_h) / nh - delta_h / (2.0 * pi)};
            arma::cx_rowvec z = upa_response(shape, cand).t() * pilot_block;
            double value = arma::accu(arma::square(arma::abs(z)));
            if (value > best_value)
            {
                best_value = value;
                best = cand;
            }
        }
    return {wrap_frequency(best.vertical), wrap_frequency(best.horizontal)};
}

AoaEstimate estimate_common_aoa(const arma::cx_mat &pilot_block, const UpaShape &shape,
                                const Stage1Options &options)
{
    AoaEstimate est;
    est.peak_bins = dft_peak_detect(pilot_block, shape, options);

    std::size_t count = est.peak_bins.n_elem;
    est.coarse.resize(count);
    est.refined.resize(count);
    est.vertical_offsets.resize(count);
    est.horizontal_offsets.resize(count);
    est.bs_steering.set_size(shape.count(), count);

    // The sub-array line searches see every path, so refine each peak against
    // the block with the other peaks' least-squares fit removed. Peaks arrive
    // strongest first; later fits reuse the already refined columns.
    arma::cx_mat steering(shape.count(), count);
    for (std::size_t l = 0; l < count; ++l)
    {
        est.coarse[l] = index_to_coarse_freq(est.peak_bins[l], shape);
        steering.col(l) = upa_response(shape, est.coarse[l]);
    }

    for (std::size_t l = 0; l < count; ++l)
    {
        arma::cx_mat target = pilot_block;
        if (count > 1)
        {
            arma::cx_mat others(shape.count(), count - 1);
            arma::uword c = 0;
            for (std::size_t j = 0; j < count; ++j)
                if (j != l)
                    others.col(c++) = steering.col(j);
            target -= others * arma::solve(others, pilot_block);
        }
        RotationSearchResult refine = angle_rotation_refine(target, shape, est.peak_bins[l],
                                                            options.rotation_grid_1, options.rotation_grid_2);
        est.refined[l] = refine.refined;
        est.vertical_offsets[l] = refine.vertical_offset;
        est.horizontal_offsets[l] = refine.horizontal_offset;
        est.objective_evaluations += refine.objective_evaluations;
        est.bs_steering.col(l) = upa_response(shape, est.refined[l]);
        steering.col(l) = est.bs_steering.col(l);
    }
    return est;
}

} // namespace bdce
