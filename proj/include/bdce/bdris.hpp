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

#ifndef BDCE_BDRIS_HPP
#define BDCE_BDRIS_HPP

#include "bdce/geometry.hpp"

#include <string>
#include <vector>

namespace bdce
{

// Block-diagonal scattering configuration of a group-connected surface: one
// square block per element group. Physically realizable (lossless,
// reciprocal) blocks are unitary; training probes need not be.
struct ScatteringMatrix
{
    GroupLayout layout;
    std::vector<arma::cx_mat> blocks; // group_count blocks, each group_size x group_size

    arma::cx_mat dense() const;      // full block-diagonal matrix
    arma::cx_vec stacked_vec() const; // column-major vec of each block, stacked group by group
    bool is_physical(double tol = 1e-9) const;
};

// Independent Haar-distributed unitary blocks.
ScatteringMatrix random_unitary_scattering(const GroupLayout &layout, Rng &rng);

// Scattering blocks of a lossless reconfigurable group: (I + Z0 Y)^-1 (I - Z0 Y)
// per group admittance matrix Y. A purely imaginary symmetric Y gives a
// unitary block; a singular I + Z0 Y is rejected.
ScatteringMatrix scattering_from_admittance(const GroupLayout &layout, const std::vector<arma::cx_mat> &admittance,
                                            double reference_impedance = 50.0);

// Pilot schedule: one column per training slot, each an i.i.d. +-1 pattern of
// the stacked block entries. Column t reshapes to the scattering blocks used
// in slot t.
struct TrainingSchedule
{
    GroupLayout layout;
    arma::mat entries; // (group_size^2 * group_count) x slots, entries +-1
    std::uint64_t seed = 0;

    int slot_count() const { return static_cast<int>(entries.n_cols); }
    arma::cx_mat complex_entries() const;
    arma::cx_mat slot_block(int t, int g) const; // group g block in slot t
    ScatteringMatrix slot_scattering(int t) const;

    void save(const std::string &path) const;
    static TrainingSchedule load(const std::string &path);
};

TrainingSchedule bernoulli_training_schedule(const GroupLayout &layout, int slots, Rng &rng);

// Row-selection blocks: for each group, the group_size x group_size^2 matrix
// whose i-th row block is the i-th row of the scattering block. They satisfy
// P_g (a (x) h) = diag(a) Phi_g h for any group-sized vectors a, h.
std::vector<arma::cx_mat> row_selection_blocks(const ScatteringMatrix &scattering);

} // namespace bdce

#endif
