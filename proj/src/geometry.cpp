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

#include "bdce/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdce
{

void validate(const UpaShape &shape)
{
    if (shape.horizontal < 1 || shape.vertical < 1)
        throw std::invalid_argument("UpaShape: array dimensions must be positive");
    if (!(shape.spacing > 0.0))
        throw std::invalid_argument("UpaShape: element spacing must be positive");
}

namespace
{

// True when the closed-form strip renumbering is well defined (and bijective).
bool strip_form_applies(const GroupLayout &layout)
{
    int s = layout.group_size();
    return layout.shape.horizontal % s == 0 && layout.shape.vertical % s == 0;
}

// True when the panel tiles into sqrt(group_size) x sqrt(group_size) squares.
bool square_form_applies(const GroupLayout &layout, int &side)
{
    int s = layout.group_size();
    side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s))));
    return side * side == s && layout.shape.horizontal % side == 0 && layout.shape.vertical % side == 0;
}

} // namespace

void validate(const GroupLayout &layout)
{
    validate(layout.shape);
    int m = layout.element_count();
    if (layout.group_count < 1)
        throw std::invalid_argument("GroupLayout: group count must be positive");
    if (m % layout.group_count != 0)
        throw std::invalid_argument("GroupLayout: group count " + std::to_string(layout.group_count) +
                                    " does not divide the element count " + std::to_string(m));
    int side = 0;
    if (!strip_form_applies(layout) && !square_form_applies(layout, side))
        throw std::invalid_argument("GroupLayout: group size " + std::to_string(layout.group_size()) +
                                    " fits a " + std::to_string(layout.shape.horizontal) + "x" +
                                    std::to_string(layout.shape.vertical) +
                                    " panel neither as strips nor as identical squares");
}

GroupLayout make_group_layout(const UpaShape &shape, int group_count)
{
    GroupLayout layout{shape, group_count};
    validate(layout);
    return layout;
}

bool same_layout(const GroupLayout &a, const GroupLayout &b)
{
    return a.shape.horizontal == b.shape.horizontal && a.shape.vertical == b.shape.vertical &&
           a.shape.spacing == b.shape.spacing && a.group_count == b.group_count;
}

arma::cx_mat AngularDictionary::group_rows(int g) const
{
    int mb = layout.group_size();
    return atoms.rows(static_cast<arma::uword>(g) * mb, static_cast<arma::uword>(g) * mb + mb - 1);
}

arma::cx_vec steering_vector(int n, double freq)
{
    if (n < 1)
        throw std::invalid_argument("steering_vector: length must be positive");
    arma::cx_vec a(n);
    for (int i = 0; i < n; ++i)
    {
        double phase = -2.0 * pi * i * freq;
        a[i] = cx(std::cos(phase), std::sin(phase));
    }
    return a;
}

arma::cx_vec upa_response(const UpaShape &shape, const SpatialFrequencyPair &pair)
{
    validate(shape);
    return arma::kron(steering_vector(shape.vertical, pair.vertical),
                      steering_vector(shape.horizontal, pair.horizontal));
}

std::vector<int> rearrangement_permutation(const GroupLayout &layout)
{
    validate(layout);
    int m = layout.element_count();
    int mb = layout.group_size();
    int mv = layout.shape.vertical;
    int mh = layout.shape.horizontal;
    std::vector<int> perm(m);

    if (strip_form_applies(layout))
    {
        for (int i = 0; i < m; ++i)
            perm[i] = mb * mv * (i / (mb * mv)) + mv * ((i / mb) % mb) + (i % mb) + mb * ((i / (mb * mb)) % (mv / mb));
        return perm;
    }

    int side = 0;
    square_form_applies(layout, side);
    int squares_per_row = mh / side;
    for (int i = 0; i < m; ++i)
    {
        int g = i / mb, e = i % mb;
        int gv = g / squares_per_row, gh = g % squares_per_row;
        int ev = e / side, eh = e % side;
        perm[i] = (gv * side + ev) * mh + gh * side + eh;
    }
    return perm;
}

arma::cx_vec rearranged_upa_response(const GroupLayout &layout, const SpatialFrequencyPair &pair)
{
    arma::cx_vec raw = upa_response(layout.shape, pair);
    std::vector<int> perm = rearrangement_permutation(layout);
    arma::cx_vec out(raw.n_elem);
    for (arma::uword i = 0; i < raw.n_elem; ++i)
        out[i] = raw[perm[i]];
    return out;
}

namespace
{

arma::cx_mat dft_matrix(int n)
{
    arma::cx_mat u(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
        {
            double phase = -2.0 * pi * i * k / n;
            u(i, k) = scale * cx(std::cos(phase), std::sin(phase));
        }
    return u;
}

} // namespace

arma::cx_mat dft_transform_matrix(const UpaShape &shape)
{
    validate(shape);
    return arma::kron(dft_matrix(shape.vertical), dft_matrix(shape.horizontal));
}

AngularDictionary build_dictionary(const GroupLayout &layout, int grid_v, int grid_h)
{
    validate(layout);
    if (grid_v < layout.shape.vertical || grid_h < layout.shape.horizontal)
        throw std::invalid_argument("build_dictionary: grid undersamples the array (" + std::to_string(grid_v) +
                                    "x" + std::to_string(grid_h) + " grid for a " +
                                    std::to_string(layout.shape.vertical) + "x" +
                                    std::to_string(layout.shape.horizontal) + " panel)");

    AngularDictionary dict;
    dict.layout = layout;
    dict.grid_vertical = grid_v;
    dict.grid_horizontal = grid_h;
    dict.atoms.set_size(layout.element_count(), static_cast<arma::uword>(grid_v) * grid_h);
    dict.grid.resize(static_cast<std::size_t>(grid_v) * grid_h);

    double d = layout.shape.spacing;
    for (int a = 0; a < grid_v; ++a)
        for (int b = 0; b < grid_h; ++b)
        {
            SpatialFrequencyPair pair{(-1.0 + 2.0 * a / grid_v) * d, (-1.0 + 2.0 * b / grid_h) * d};
            arma::uword col = static_cast<arma::uword>(a) * grid_h + b;
            dict.atoms.col(col) = rearranged_upa_response(layout, pair);
            dict.grid[col] = pair;
        }
    return dict;
}

} // namespace bdce
