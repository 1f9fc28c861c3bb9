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

#include "bdce/sparse.hpp"

#include <stdexcept>
#include <string>

namespace bdce
{

arma::cx_vec ls_on_support(const arma::cx_mat &dict, const arma::cx_vec &y, const arma::uvec &support)
{
    if (dict.n_rows != y.n_elem)
        throw std::invalid_argument("ls_on_support: dictionary and measurement dimensions disagree");
    for (arma::uword idx : support)
        if (idx >= dict.n_cols)
            throw std::invalid_argument("ls_on_support: column index " + std::to_string(idx) + " out of range");
    if (support.n_elem == 0)
        return arma::cx_vec();

    arma::cx_mat sub = dict.cols(support);
    arma::cx_vec coef;
    bool ok = arma::solve(coef, sub, y, arma::solve_opts::no_approx);
    if (!ok)
        coef = arma::pinv(sub) * y; // rank-deficient support
    return coef;
}

std::pair<arma::cx_mat, arma::vec> column_normalize(const arma::cx_mat &dict)
{
    arma::vec norms(dict.n_cols);
    arma::cx_mat out(dict.n_rows, dict.n_cols);
    for (arma::uword c = 0; c < dict.n_cols; ++c)
    {
        double n = arma::norm(dict.col(c), 2);
        if (n == 0.0)
            throw std::invalid_argument("column_normalize: column " + std::to_string(c) + " is zero");
        norms[c] = n;
        out.col(c) = dict.col(c) / n;
    }
    return {std::move(out), std::move(norms)};
}

SparseSolution omp(const arma::cx_mat &dict, const arma::cx_vec &y, const OmpOptions &options)
{
    if (dict.n_rows != y.n_elem)
        throw std::invalid_argument("omp: dictionary and measurement dimensions disagree");
    if (options.max_atoms < 0)
        throw std::invalid_argument("omp: max_atoms must be non-negative");

    auto [normalized, norms] = column_normalize(dict);
    (void)norms;

    SparseSolution sol;
    arma::cx_vec residual = y;
    sol.residual_norm = arma::norm(residual, 2);

    int budget = std::min<int>(options.max_atoms, static_cast<int>(dict.n_cols));
    std::vector<arma::uword> picked;
    picked.reserve(budget);
    std::vector<bool> in_support(dict.n_cols, false);

    while (static_cast<int>(picked.size()) < budget)
    {
        if (options.residual_threshold >= 0.0 && sol.residual_norm <= options.residual_threshold)
            break;

        arma::cx_vec corr = normalized.t() * residual;
        arma::uword best = dict.n_cols;
        double best_val = 0.0;
        for (arma::uword c = 0; c < corr.n_elem; ++c)
        {
            if (in_support[c])
                continue; // the residual is already orthogonal to these
            double val = std::abs(corr[c]);
            if (best == dict.n_cols || val > best_val)
            {
                best_val = val;
                best = c;
            }
        }
        if (best == dict.n_cols || best_val == 0.0)
            break; // nothing left to explain (covers the zero measurement)

        picked.push_back(best);
        in_support[best] = true;
        sol.support = arma::uvec(picked);
        sol.coefficients = ls_on_support(dict, y, sol.support);
        residual = y - dict.cols(sol.support) * sol.coefficients;
        sol.residual_norm = arma::norm(residual, 2);
    }
    if (sol.support.n_elem == 0)
        sol.residual_norm = arma::norm(y, 2);
    return sol;
}

} // namespace bdce
