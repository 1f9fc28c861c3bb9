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

#ifndef BDCE_SPARSE_HPP
#define BDCE_SPARSE_HPP

#include "bdce/common.hpp"

namespace bdce
{

struct SparseSolution
{
    arma::uvec support;          // selected columns, in selection order
    arma::cx_vec coefficients;   // least-squares coefficients on the support
    double residual_norm = 0.0;  // Euclidean norm of the final residual
};

struct OmpOptions
{
    int max_atoms = 0;                // stop after this many selections
    double residual_threshold = -1.0; // additional stop when ||r|| <= this (negative: disabled)
};

// Least-squares fit of y on the given dictionary columns. Rank-deficient
// supports fall back to the pseudo-inverse solution.
arma::cx_vec ls_on_support(const arma::cx_mat &dict, const arma::cx_vec &y, const arma::uvec &support);

// Scale every column to unit norm; returns the matrix and the original norms.
// A zero column is an error (the offending index is named).
std::pair<arma::cx_mat, arma::vec> column_normalize(const arma::cx_mat &dict);

// Orthogonal matching pursuit. Correlations are taken against unit-normalized
// columns; the coefficients are refit by least squares on the original columns
// after every selection. Ties in the correlation resolve to the lowest column
// index. A zero measurement yields an empty support.
SparseSolution omp(const arma::cx_mat &dict, const arma::cx_vec &y, const OmpOptions &options);

} // namespace bdce

#endif
