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

#ifndef BDCE_TESTS_HELPERS_HPP
#define BDCE_TESTS_HELPERS_HPP

#include "bdce/common.hpp"
#include "bdce/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace bdce_test
{

inline double rel_diff(const arma::cx_mat &a, const arma::cx_mat &b)
{
    double base = arma::norm(b, "fro");
    if (base == 0.0)
        return arma::norm(a, "fro");
    return arma::norm(a - b, "fro") / base;
}

inline double rel_diff(const arma::cx_vec &a, const arma::cx_vec &b)
{
    return rel_diff(arma::cx_mat(a), arma::cx_mat(b));
}

// Wrap-aware distance between two spatial frequency pairs (max over axes).
inline double freq_dist(const bdce::SpatialFrequencyPair &a, const bdce::SpatialFrequencyPair &b)
{
    double dv = std::abs(bdce::wrap_frequency(a.vertical - b.vertical));
    double dh = std::abs(bdce::wrap_frequency(a.horizontal - b.horizontal));
    return std::max(dv, dh);
}

// Best assignment of estimated frequency pairs to true ones (estimates come
// back in power order, not draw order). Brute force over permutations; the
// path counts in the tests are small. Returns the largest matched distance.
inline double match_frequencies(const std::vector<bdce::SpatialFrequencyPair> &estimated,
                                const std::vector<bdce::SpatialFrequencyPair> &truth)
{
    if (estimated.size() != truth.size())
        return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order(truth.size());
    std::iota(order.begin(), order.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i)
            worst = std::max(worst, freq_dist(estimated[i], truth[order[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

inline arma::cx_mat random_cx_mat(arma::uword rows, arma::uword cols, bdce::Rng &rng)
{
    arma::cx_mat out(rows, cols);
    for (arma::uword c = 0; c < cols; ++c)
        for (arma::uword r = 0; r < rows; ++r)
            out(r, c) = rng.complex_gaussian(1.0);
    return out;
}

inline arma::cx_vec random_cx_vec(arma::uword n, bdce::Rng &rng)
{
    arma::cx_vec out(n);
    for (arma::uword i = 0; i < n; ++i)
        out[i] = rng.complex_gaussian(1.0);
    return out;
}

} // namespace bdce_test

#endif
