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

#include "bdce/geometry.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bdce;
using bdce_test::random_cx_mat;
using bdce_test::random_cx_vec;
using bdce_test::rel_diff;

namespace
{

arma::cx_mat unitary_dictionary(int n)
{
    return dft_transform_matrix(UpaShape{n, 1, 0.5});
}

} // namespace

TEST_SUITE("sparse")
{
    TEST_CASE("exact recovery on an orthonormal dictionary")
    {
        arma::cx_mat dict = unitary_dictionary(8);
        arma::cx_vec y = 2.0 * dict.col(3) + cx(0.0, -0.5) * dict.col(5);

        SparseSolution sol = omp(dict, y, OmpOptions{2, -1.0});
        REQUIRE(sol.support.n_elem == 2);
        // The stronger atom is found first.
        CHECK(sol.support[0] == 3);
        CHECK(sol.support[1] == 5);
        CHECK(std::abs(sol.coefficients[0] - cx(2.0, 0.0)) < 1e-12);
        CHECK(std::abs(sol.coefficients[1] - cx(0.0, -0.5)) < 1e-12);
        CHECK(sol.residual_norm < 1e-12);
    }

    TEST_CASE("correlation ties pick the lowest column")
    {
        arma::cx_mat dict(4, 3, arma::fill::zeros);
        dict(0, 0) = 1.0;
        dict(0, 1) = 1.0; // duplicate of column 0
        dict(1, 2) = 1.0;
        arma::cx_vec y(4, arma::fill::zeros);
        y[0] = 1.0;

        SparseSolution sol = omp(dict, y, OmpOptions{1, -1.0});
        REQUIRE(sol.support.n_elem == 1);
        CHECK(sol.support[0] == 0);
    }

    TEST_CASE("residual threshold stops early")
    {
        arma::cx_mat dict = unitary_dictionary(6);
        arma::cx_vec y = cx(0.0, 3.0) * dict.col(2);
        SparseSolution sol = omp(dict, y, OmpOptions{5, 1e-10});
        CHECK(sol.support.n_elem == 1);
        CHECK(sol.residual_norm <= 1e-10);
    }

    TEST_CASE("zero measurement yields an empty support")
    {
        arma::cx_mat dict = unitary_dictionary(4);
        SparseSolution sol = omp(dict, arma::cx_vec(4, arma::fill::zeros), OmpOptions{2, -1.0});
        CHECK(sol.support.n_elem == 0);
        CHECK(sol.residual_norm == 0.0);
    }

    TEST_CASE("support recovery on a random dictionary")
    {
        Rng rng(71);
        arma::cx_mat dict = random_cx_mat(20, 40, rng);
        arma::cx_vec truth(40, arma::fill::zeros);
        truth[4] = cx(1.5, 0.3);
        truth[17] = cx(-0.8, 1.1);
        truth[33] = cx(0.2, -2.0);
        arma::cx_vec y = dict * truth;

        SparseSolution sol = omp(dict, y, OmpOptions{3, -1.0});
        arma::uvec sorted = arma::sort(sol.support);
        REQUIRE(sorted.n_elem == 3);
        CHECK(sorted[0] == 4);
        CHECK(sorted[1] == 17);
        CHECK(sorted[2] == 33);
        CHECK(sol.residual_norm < 1e-10 * arma::norm(y));
    }

    TEST_CASE("least squares on a support matches the direct solve")
    {
        Rng rng(5);
        arma::cx_mat dict = random_cx_mat(12, 20, rng);
        arma::cx_vec y = random_cx_vec(12, rng);
        arma::uvec support{2, 9, 14};
        arma::cx_vec coef = ls_on_support(dict, y, support);
        arma::cx_vec direct = arma::solve(arma::cx_mat(dict.cols(support)), y);
        CHECK(rel_diff(coef, direct) < 1e-10);
    }

    TEST_CASE("rank-deficient supports fall back to the pseudo-inverse")
    {
        arma::cx_mat dict(3, 2);
        dict.col(0) = arma::cx_vec{cx(1, 0), cx(0, 1), cx(2, 0)};
        dict.col(1) = dict.col(0); // exactly dependent
        arma::cx_vec y = cx(3.0, 0.0) * dict.col(0);
        arma::uvec support{0, 1};
        arma::cx_vec coef = ls_on_support(dict, y, support);
        // The fit must still reproduce the projection of y.
        CHECK(rel_diff(arma::cx_vec(dict.cols(support) * coef), y) < 1e-10);
    }

    TEST_CASE("column normalization reports norms and rejects zero columns")
    {
        arma::cx_mat dict(3, 2, arma::fill::zeros);
        dict(0, 0) = cx(3.0, 4.0);
        dict(1, 1) = cx(0.0, 2.0);
        auto [normalized, norms] = column_normalize(dict);
        CHECK(norms[0] == doctest::Approx(5.0));
        CHECK(norms[1] == doctest::Approx(2.0));
        CHECK(std::abs(arma::norm(normalized.col(0)) - 1.0) < 1e-12);
        CHECK(std::abs(arma::norm(normalized.col(1)) - 1.0) < 1e-12);

        dict.col(1).zeros();
        CHECK_THROWS_AS(column_normalize(dict), std::invalid_argument);
    }
}
