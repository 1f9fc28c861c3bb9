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

#ifndef BDCE_STAGE3_HPP
#define BDCE_STAGE3_HPP

#include "bdce/bdris.hpp"
#include "bdce/common.hpp"
#include "bdce/geometry.hpp"
#include "bdce/sparse.hpp"
#include "bdce/stage2.hpp"

#include <functional>
#include <vector>

namespace bdce
{

// Third training stage, run once per remaining user. The arrival directions,
// departure offsets and gain ratios recovered by the first two stages are
// folded into one composite channel proxy shared by everybody; what is left
// per user is a coarse departure hypothesis plus a small sparse fit of the
// user-side directions, found by a block-wise pursuit over lazily built
// sensing blocks.

// Diagonal per-path scales shared by all remaining users: the conjugated
// strongest reference coefficient times each gain ratio.
arma::cx_vec shared_path_scales(const Stage2Result &reference);

// Composite channel proxy built from the first two stages: steering matrix
// times diagonal scales times the adjoint of the per-path offset responses.
// The reference path contributes an all-ones response column.
arma::cx_mat composite_channel(const arma::cx_mat &bs_steering, const arma::cx_vec &path_scales,
                               const GroupLayout &layout,
                               const std::vector<SpatialFrequencyPair> &deltas);

// Swap the two Kronecker factors inside each group block: reshape to a
// square, transpose without conjugation, vectorise again. Involution.
arma::cx_vec swap_kron_factors(const arma::cx_vec &stacked, const GroupLayout &layout);

struct BlockPursuitResult
{
    arma::uword block = 0;
    SparseSolution fit;
};

// Run greedy pursuit inside every block and keep the block whose fit leaves
// the smallest residual (ties resolve to the lowest block index). A single
// best-column correlation would be cheaper, but with several active paths
// one column only sees one path's energy and noise flips the ranking between
// neighbouring blocks; the residual weighs all paths at once. Blocks are
// requested through the provider so callers can build them lazily. Zero
// columns are skipped; blocks with none usable are passed over. The pursuit
// may keep up to twice the nominal sparsity: neighbouring grid columns are
// coherent, and a bracketing first pick would otherwise lock the fit out of
// an exact representation that a few extra atoms still reach.
BlockPursuitResult hierarchical_block_pursuit(const std::function<arma::cx_mat(arma::uword)> &block,
                                              arma::uword block_count, const arma::cx_vec &measurement,
                                              int sparsity);

struct Stage3Options
{
    // Greedy-pursuit budget inside the selected block (user path count).
    int user_sparsity = 3;

    // Coarse departure grid. Zero picks 2x the matching surface dimension.
    int macro_grid_v = 0;
    int macro_grid_h = 0;
};

struct Stage3Result
{
    // Selected coarse departure hypothesis.
    arma::uword macro_index = 0;
    SpatialFrequencyPair macro_pair;

    // Sparse fit inside the selected block and the grid frequencies behind
    // its support.
    SparseSolution intra_fit;
    std::vector<SpatialFrequencyPair> user_frequencies;

    // Column l is the estimated stacked cascaded coefficient vector of
    // arrival path l.
    arma::cx_mat coefficient_vectors;

    // Estimated cascaded channel of this user.
    arma::cx_mat channel;
};

Stage3Result estimate_other_user(const arma::cx_mat &pilot_block, double transmit_power,
                                 const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                                 const AngularDictionary &intra_dict, const Stage2Result &reference,
                                 const Stage3Options &options);

} // namespace bdce

#endif
