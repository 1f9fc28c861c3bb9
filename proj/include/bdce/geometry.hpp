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

#ifndef BDCE_GEOMETRY_HPP
#define BDCE_GEOMETRY_HPP

#include "bdce/common.hpp"

#include <vector>

namespace bdce
{

// Uniform planar array. Element (i_v, i_h) sits at row i_v, column i_h and
// occupies linear index i_v * horizontal + i_h (vertical-major layout).
struct UpaShape
{
    int horizontal = 1;   // number of columns
    int vertical = 1;     // number of rows
    double spacing = 0.5; // element spacing in wavelengths (d / lambda)

    int count() const { return horizontal * vertical; }
};

void validate(const UpaShape &shape);

// Pair of spatial frequencies (vertical first), each in [-spacing, spacing).
struct SpatialFrequencyPair
{
    double vertical = 0.0;
    double horizontal = 0.0;
};

// Partition of a planar array into equally sized element groups. The group
// size must either divide both array dimensions (strip tiling, the closed
// form below applies) or be a perfect square whose side divides both array
// dimensions (square tiling). Anything else is rejected.
struct GroupLayout
{
    UpaShape shape;
    int group_count = 1;

    int element_count() const { return shape.count(); }
    int group_size() const { return shape.count() / group_count; }
};

GroupLayout make_group_layout(const UpaShape &shape, int group_count);
void validate(const GroupLayout &layout);
bool same_layout(const GroupLayout &a, const GroupLayout &b);

// Grid of rearranged array responses used as sparse-recovery atoms.
struct AngularDictionary
{
    GroupLayout layout;
    int grid_vertical = 0;
    int grid_horizontal = 0;
    arma::cx_mat atoms;                     // element_count x (grid_v * grid_h)
    std::vector<SpatialFrequencyPair> grid; // frequency pair behind each column

    int column_count() const { return grid_vertical * grid_horizontal; }

    // Rows of `atoms` belonging to group g.
    arma::cx_mat group_rows(int g) const;
};

// a_n(f): n-element uniform linear array response, entry i = exp(-j 2 pi i f).
arma::cx_vec steering_vector(int n, double freq);

// Planar response: Kronecker product of the vertical and horizontal linear
// responses, vertical factor first. Entry (i_v * P_h + i_h) equals
// exp(-j 2 pi (i_v * z + i_h * x)).
arma::cx_vec upa_response(const UpaShape &shape, const SpatialFrequencyPair &pair);

// Permutation p with rearranged[i] = raw[p[i]] that renumbers the elements
// group by group. When the group size divides both array dimensions the
// closed-form strip renumbering is used; otherwise the groups are the
// identical squares tiling the panel, numbered horizontally then vertically,
// with the same order inside each square.
std::vector<int> rearrangement_permutation(const GroupLayout &layout);

// Planar response in the rearranged element order.
arma::cx_vec rearranged_upa_response(const GroupLayout &layout, const SpatialFrequencyPair &pair);

// Unitary 2-D DFT transform, Kronecker product of the per-dimension DFT
// matrices in the same order as upa_response (vertical factor first). For an
// on-grid frequency pair the transformed response has a single nonzero entry
// of magnitude sqrt(count).
arma::cx_mat dft_transform_matrix(const UpaShape &shape);

// Dictionary with grid_v * grid_h rearranged responses. Column g_v * grid_h +
// g_h holds the response at frequencies ((-1 + 2 g_v / grid_v) * spacing,
// (-1 + 2 g_h / grid_h) * spacing). Grids must not undersample the array.
AngularDictionary build_dictionary(const GroupLayout &layout, int grid_v, int grid_h);

} // namespace bdce

#endif
