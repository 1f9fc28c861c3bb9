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

#ifndef BDCE_STAGE2_HPP
#define BDCE_STAGE2_HPP

#include "bdce/bdris.hpp"
#include "bdce/common.hpp"
#include "bdce/geometry.hpp"
#include "bdce/sparse.hpp"

#include <vector>

namespace bdce
{

// Second training stage, run on the typical user (the one closest to the
// surface). After projecting the pilot block onto the stage-one steering
// matrix, each column follows a sparse model over a dictionary of cascaded
// user/departure atom pairs. Only the strongest column is solved by greedy
// pursuit; every other column is tied to it through a 2-D frequency-shift
// search plus one scalar fit, which preserves the gain ratios that the third
// stage needs.

// Pilot block projected onto the estimated steering matrix and rescaled so
// array gain and transmit power drop out. Entry (t, l) is the conjugated
// slot-t response of arrival path l.
arma::cx_mat equivalent_measurements(const arma::cx_mat &pilot_block, double transmit_power,
                                     const arma::cx_mat &bs_steering);

// Stacked per-group atom of the cascaded coefficient vector: block g equals
// kron(conj(user atom group rows), departure atom group rows). Column index
// c = c_user * aod_columns + c_aod.
arma::cx_vec composite_atom(const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                            arma::uword column);

// Training-domain dictionary: schedule projection of every composite atom,
// slot_count x (user columns * aod columns). Assembled per group and per
// group row instead of materialising the composite dictionary.
arma::cx_mat equivalent_dictionary(const TrainingSchedule &schedule,
                                   const AngularDictionary &user_dict,
                                   const AngularDictionary &aod_dict);

// Multiply the per-group inner (departure-side) factor of a stacked cascaded
// coefficient vector by the array response at the given frequency offset.
// Shifts every departure frequency in the vector by `delta` while leaving the
// user-side factors untouched.
arma::cx_vec apply_delta(const arma::cx_vec &coefficients, const GroupLayout &layout,
                         const SpatialFrequencyPair &delta);

struct Stage2Options
{
    // Nominal user path count. The reference-column pursuit may keep up to
    // twice this many atoms before its residual threshold kicks in.
    int user_sparsity = 3;

    // Frequency-shift search grids over [-2 spacing, 2 spacing) per axis.
    // Zero picks 8x the matching surface dimension.
    int delta_grid_v = 0;
    int delta_grid_h = 0;
};

struct Stage2Result
{
    // Strongest projected column; all other columns are expressed relative
    // to it.
    arma::uword reference_column = 0;

    // Greedy fit of the reference column over the equivalent dictionary,
    // plus the grid frequencies behind its support.
    SparseSolution reference_fit;
    std::vector<SpatialFrequencyPair> user_frequencies;
    SpatialFrequencyPair reference_aod;

    // Strongest reference coefficient (the scale the third stage reuses).
    cx reference_coefficient = 0.0;

    // Per-path departure-frequency offsets and complex gain ratios relative
    // to the reference column (identity entries at the reference itself).
    std::vector<SpatialFrequencyPair> deltas;
    arma::cx_vec gain_ratios;

    // Column l is the estimated stacked cascaded coefficient vector of
    // arrival path l.
    arma::cx_mat coefficient_vectors;

    // Estimated cascaded channel of the typical user.
    arma::cx_mat channel;
};

Stage2Result estimate_typical_user(const arma::cx_mat &pilot_block, double transmit_power,
                                   const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                                   const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                                   const Stage2Options &options);

} // namespace bdce

#endif
