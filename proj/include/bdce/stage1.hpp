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

#ifndef BDCE_STAGE1_HPP
#define BDCE_STAGE1_HPP

#include "bdce/common.hpp"
#include "bdce/geometry.hpp"

#include <cstddef>
#include <vector>

namespace bdce
{

// First training stage. Every user's cascaded channel shares the same set of
// base-station arrival directions, so one pilot block observed through a
// fixed surface state is enough to estimate them for everybody at once. The
// block is swept by a 2-D DFT, peak bins give coarse directions, and a
// per-peak rotation search recovers the off-grid remainder to sub-bin
// accuracy.

struct Stage1Options
{
    // Number of arrival paths when known a priori. Positive: pick exactly
    // that many strongest bins. -1: switch to threshold detection.
    int known_count = -1;

    // Threshold mode keeps bins whose power is at least this fraction of the
    // strongest bin and which dominate their eight wrap-around neighbours on
    // the vertical-by-horizontal bin grid.
    double relative_threshold = 0.1;

    // Point counts of the two 1-D rotation searches (vertical, horizontal).
    int rotation_grid_1 = 64;
    int rotation_grid_2 = 64;
};

struct RotationSearchResult
{
    SpatialFrequencyPair refined;
    double vertical_offset = 0.0; // selected rotations, radians
    double horizontal_offset = 0.0;
    long objective_evaluations = 0;
};

struct AoaEstimate
{
    // DFT bins selected by the peak detector, strongest first.
    arma::uvec peak_bins;

    // Bin-centre frequencies and their rotation-refined counterparts, in the
    // same order as peak_bins.
    std::vector<SpatialFrequencyPair> coarse;
    std::vector<SpatialFrequencyPair> refined;
    std::vector<double> vertical_offsets;
    std::vector<double> horizontal_offsets;

    // Estimated array response matrix, one column per detected path.
    arma::cx_mat bs_steering;

    // Rotation-search objective evaluations summed over all peaks.
    long objective_evaluations = 0;

    std::size_t path_count() const { return coarse.size(); }
};

// Squared row norms of the DFT-domain projection of the pilot block.
arma::vec dft_row_powers(const arma::cx_mat &pilot_block, const UpaShape &shape);

// Peak bins of the projected pilot block, strongest first. Throws if the
// block is identically zero or the requested count exceeds the array size.
arma::uvec dft_peak_detect(const arma::cx_mat &pilot_block, const UpaShape &shape,
                           const Stage1Options &options);

// Centre frequency of a DFT bin. Bins are numbered with the vertical index
// slow, matching the array layout, and frequencies wrap to [-0.5, 0.5).
SpatialFrequencyPair index_to_coarse_freq(arma::uword bin, const UpaShape &shape);

// Off-grid refinement around one detected bin. Each axis is searched
// independently on the sub-array where the other axis contributes no phase,
// over a half-open rotation grid [-pi/N, pi/N); even point counts place one
// point exactly at zero.
RotationSearchResult angle_rotation_refine(const arma::cx_mat &pilot_block,
                                           const UpaShape &shape, arma::uword bin,
                                           int grid_1, int grid_2);

// Joint 2-D rotation search over the full array, used to cross-check the
// separable search. Costs grid_1 * grid_2 objective evaluations per bin.
SpatialFrequencyPair rotation_refine_joint(const arma::cx_mat &pilot_block,
                                           const UpaShape &shape, arma::uword bin,
                                           int grid_1, int grid_2);

// Full stage: detect peaks, refine each, assemble the steering matrix.
AoaEstimate estimate_common_aoa(const arma::cx_mat &pilot_block, const UpaShape &shape,
                                const Stage1Options &options);

} // namespace bdce

#endif
