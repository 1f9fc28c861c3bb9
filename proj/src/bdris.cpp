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

#include "bdce/bdris.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bdce
{

arma::cx_mat ScatteringMatrix::dense() const
{
    int m = layout.element_count();
    int mb = layout.group_size();
    arma::cx_mat out(m, m, arma::fill::zeros);
    for (int g = 0; g < layout.group_count; ++g)
        out.submat(g * mb, g * mb, g * mb + mb - 1, g * mb + mb - 1) = blocks[g];
    return out;
}

arma::cx_vec ScatteringMatrix::stacked_vec() const
{
    int mb = layout.group_size();
    arma::cx_vec out(static_cast<arma::uword>(mb) * mb * layout.group_count);
    for (int g = 0; g < layout.group_count; ++g)
        out.subvec(static_cast<arma::uword>(g) * mb * mb, (static_cast<arma::uword>(g) + 1) * mb * mb - 1) =
            arma::vectorise(blocks[g]);
    return out;
}

bool ScatteringMatrix::is_physical(double tol) const
{
    int mb = layout.group_size();
    arma::cx_mat eye = arma::eye<arma::cx_mat>(mb, mb);
    for (const auto &b : blocks)
        if (arma::norm(b.t() * b - eye, "fro") > tol)
            return false;
    return true;
}

ScatteringMatrix random_unitary_scattering(const GroupLayout &layout, Rng &rng)
{
    validate(layout);
    int mb = layout.group_size();
    ScatteringMatrix s;
    s.layout = layout;
    s.blocks.resize(layout.group_count);
    for (int g = 0; g < layout.group_count; ++g)
    {
        arma::cx_mat ginibre(mb, mb);
        for (int c = 0; c < mb; ++c)
            for (int r = 0; r < mb; ++r)
                ginibre(r, c) = rng.complex_gaussian(1.0);
        arma::cx_mat q, r;
        if (!arma::qr(q, r, ginibre))
            throw std::runtime_error("random_unitary_scattering: QR factorization failed");
        // Fix the phases so the distribution is Haar.
        for (int c = 0; c < mb; ++c)
        {
            cx d = r(c, c);
            double mag = std::abs(d);
            q.col(c) *= (mag > 0.0) ? d / mag : cx(1.0, 0.0);
        }
        s.blocks[g] = q;
    }
    return s;
}

ScatteringMatrix scattering_from_admittance(const GroupLayout &layout, const std::vector<arma::cx_mat> &admittance,
                                            double reference_impedance)
{
    validate(layout);
    int mb = layout.group_size();
    if (static_cast<int>(admittance.size()) != layout.group_count)
        throw std::invalid_argument("scattering_from_admittance: expected one admittance block per group");
    if (!(reference_impedance > 0.0))
        throw std::invalid_argument("scattering_from_admittance: reference impedance must be positive");

    ScatteringMatrix s;
    s.layout = layout;
    s.blocks.resize(layout.group_count);
    arma::cx_mat eye = arma::eye<arma::cx_mat>(mb, mb);
    for (int g = 0; g < layout.group_count; ++g)
    {
        const arma::cx_mat &y = admittance[g];
        if (y.n_rows != static_cast<arma::uword>(mb) || y.n_cols != static_cast<arma::uword>(mb))
            throw std::invalid_argument("scattering_from_admittance: admittance block has the wrong size");
        arma::cx_mat lhs = eye + reference_impedance * y;
        arma::cx_mat block;
        if (!arma::solve(block, lhs, arma::cx_mat(eye - reference_impedance * y), arma::solve_opts::no_approx))
            throw std::invalid_argument("scattering_from_admittance: I + Z0 Y is singular for group " +
                                        std::to_string(g));
        s.blocks[g] = block;
    }
    return s;
}

arma::cx_mat TrainingSchedule::complex_entries() const
{
    return arma::cx_mat(entries, arma::mat(entries.n_rows, entries.n_cols, arma::fill::zeros));
}

arma::cx_mat TrainingSchedule::slot_block(int t, int g) const
{
    int mb = layout.group_size();
    if (t < 0 || t >= slot_count())
        throw std::invalid_argument("TrainingSchedule: slot index out of range");
    arma::mat raw = arma::reshape(entries.submat(static_cast<arma::uword>(g) * mb * mb, t,
                                                 (static_cast<arma::uword>(g) + 1) * mb * mb - 1, t),
                                  mb, mb);
    return arma::cx_mat(raw, arma::mat(mb, mb, arma::fill::zeros));
}

ScatteringMatrix TrainingSchedule::slot_scattering(int t) const
{
    ScatteringMatrix s;
    s.layout = layout;
    s.blocks.resize(layout.group_count);
    for (int g = 0; g < layout.group_count; ++g)
        s.blocks[g] = slot_block(t, g);
    return s;
}

void TrainingSchedule::save(const std::string &path) const
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("TrainingSchedule::save: cannot open " + path);
    out << "bdce-training-schedule v1\n";
    out << layout.shape.horizontal << " " << layout.shape.vertical << " " << layout.shape.spacing << " "
        << layout.group_count << " " << entries.n_cols << " " << seed << "\n";
    for (arma::uword t = 0; t < entries.n_cols; ++t)
    {
        for (arma::uword r = 0; r < entries.n_rows; ++r)
            out << (entries(r, t) > 0 ? "+" : "-");
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("TrainingSchedule::save: write to " + path + " failed");
}

TrainingSchedule TrainingSchedule::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("TrainingSchedule::load: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "bdce-training-schedule v1")
        throw std::runtime_error("TrainingSchedule::load: unrecognized header in " + path);

    TrainingSchedule sched;
    int slots = 0;
    in >> sched.layout.shape.horizontal >> sched.layout.shape.vertical >> sched.layout.shape.spacing >>
        sched.layout.group_count >> slots >> sched.seed;
    if (!in)
        throw std::runtime_error("TrainingSchedule::load: malformed dimension line in " + path);
    validate(sched.layout);
    std::string line;
    std::getline(in, line); // rest of the dimension line

    arma::uword rows = static_cast<arma::uword>(sched.layout.group_size()) * sched.layout.group_size() *
                       sched.layout.group_count;
    sched.entries.set_size(rows, slots);
    for (int t = 0; t < slots; ++t)
    {
        if (!std::getline(in, line) || line.size() != rows)
            throw std::runtime_error("TrainingSchedule::load: slot " + std::to_string(t) + " is malformed");
        for (arma::uword r = 0; r < rows; ++r)
        {
            if (line[r] == '+')
                sched.entries(r, t) = 1.0;
            else if (line[r] == '-')
                sched.entries(r, t) = -1.0;
            else
                throw std::runtime_error("TrainingSchedule::load: invalid entry in slot " + std::to_string(t));
        }
    }
    return sched;
}

TrainingSchedule bernoulli_training_schedule(const GroupLayout &layout, int slots, Rng &rng)
{
    validate(layout);
    if (slots < 1)
        throw std::invalid_argument("bernoulli_training_schedule: slot count must be positive");
    TrainingSchedule sched;
    sched.layout = layout;
    arma::uword rows = static_cast<arma::uword>(layout.group_size()) * layout.group_size() * layout.group_count;
    sched.entries.set_size(rows, slots);
    for (int t = 0; t < slots; ++t)
        for (arma::uword r = 0; r < rows; ++r)
            sched.entries(r, t) = rng.rademacher();
    return sched;
}

std::vector<arma::cx_mat> row_selection_blocks(const ScatteringMatrix &scattering)
{
    int mb = scattering.layout.group_size();
    std::vector<arma::cx_mat> out(scattering.layout.group_count);
    for (int g = 0; g < scattering.layout.group_count; ++g)
    {
        arma::cx_mat p(mb, static_cast<arma::uword>(mb) * mb, arma::fill::zeros);
        for (int i = 0; i < mb; ++i)
            p.submat(i, static_cast<arma::uword>(i) * mb, i, static_cast<arma::uword>(i) * mb + mb - 1) =
                scattering.blocks[g].row(i);
        out[g] = p;
    }
    return out;
}

} // namespace bdce
