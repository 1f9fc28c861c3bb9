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

#ifndef BDCE_BASELINES_HPP
#define BDCE_BASELINES_HPP

#include "bdce/bdris.hpp"
#include "bdce/common.hpp"
#include "bdce/geometry.hpp"
#include "bdce/sparse.hpp"

#include <vector>

namespace bdce
{

// Reference estimators the staged protocol is measured against. Both work on
// one user's pilot block at a time and know nothing about the structure
// shared across users.

// Greedy pursuit on the fully vectorised observation. Atoms are separable
// pairs of one station response and one conjugated composite surface atom;
// correlations are evaluated streaming so the Kronecker sensing matrix is
// never materialised.
struct DirectOmpOptions
{
    // Number of rank-one terms to pick.
    int sparsity = 1;

    // Upper bound on station atoms times surface atoms times their combined
    // length; configurations above it are refused instead of thrashing.
    unsigned long long memory_budget = 1ull << 33;
};

struct DirectOmpResult
{
    arma::cx_mat channel; // stations x stacked surface coefficients
    arma::uvec bs_support;
    arma::uvec ris_support;
    arma::cx_vec coefficients;
    double residual_norm = 0.0;
};

DirectOmpResult direct_omp_estimate(const arma::cx_mat &pilot_block, double transmit_power,
                                    const TrainingSchedule &schedule, const AngularDictionary &bs_dict,
                                    const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                                    const DirectOmpOptions &options);

// Sparse Bayesian fit of one projected pilot column over the equivalent
// dictionary, using the measurement-space (dual) covariance form with
// expectation-maximisation updates of the per-atom weights and the noise
// level.
struct SblOptions
{
    int max_iterations = 50;
    double tolerance = 1e-6;

    // Atoms whose weight falls below this fraction of the largest weight are
    // dropped from the active set. Zero keeps every atom to the end.
    double prune_threshold = 0.0;
};

struct SblColumnResult
{
    arma::cx_vec weights;  // posterior mean, full dictionary length
    arma::vec atom_scales; // final per-atom prior scales
    double noise_variance = 0.0;
    std::vector<double> evidence; // objective after each iteration
    int iterations = 0;
};

SblColumnResult sbl_fit(const arma::cx_mat &dictionary, const arma::cx_vec &measurement,
                        const SblOptions &options);

struct SblResult
{
    arma::cx_mat channel; // stations x stacked surface coefficients
    std::vector<SblColumnResult> columns;
};

SblResult sbl_estimate(const arma::cx_mat &pilot_block, double transmit_power,
                       const arma::cx_mat &bs_steering, const TrainingSchedule &schedule,
                       const AngularDictionary &user_dict, const AngularDictionary &aod_dict,
                       const SblOptions &options);

} // namespace bdce

#endif
