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

#ifndef BDCE_COMMON_HPP
#define BDCE_COMMON_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <random>

namespace bdce
{

using cx = std::complex<double>;

constexpr double pi = 3.141592653589793238462643383279502884;

// SplitMix64 finalizer, used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable per-trial seed from (master seed, sweep point index, trial index).
// Trials are mutually independent streams no matter in which order, or on
// how many threads, they are executed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sweep_index, std::uint64_t trial_index)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(0x632be59bd9b4e019ULL + sweep_index));
    h = splitmix64(h ^ splitmix64(0xe220a8397b1dcdafULL + trial_index));
    return h;
}

// Deterministic random stream. All randomness in the library flows through
// this class; the standard distributions are avoided on purpose because their
// output is not pinned by the C++ standard, and campaign re-runs must be
// bit-identical.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t next_u64() { return engine(); }

    // Uniform double in [0, 1), built from the top 53 bits.
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection sampling keeps the stream unbiased.
    std::uint64_t uniform_index(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("Rng::uniform_index: n must be positive");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine();
        while (x >= limit)
            x = engine();
        return x % n;
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian()
    {
        if (have_spare)
        {
            have_spare = false;
            return spare;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * pi * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex Gaussian CN(0, variance).
    cx complex_gaussian(double variance)
    {
        double s = std::sqrt(0.5 * variance);
        return cx(s * gaussian(), s * gaussian());
    }

    double rademacher() { return (engine() >> 63) ? 1.0 : -1.0; }

  private:
    std::mt19937_64 engine;
    bool have_spare = false;
    double spare = 0.0;
};

// Wrap a spatial frequency onto [-0.5, 0.5).
inline double wrap_frequency(double f)
{
    return f - std::floor(f + 0.5);
}

// Index of the entry with the largest magnitude; ties resolve to the lowest
// index (strict greater-than comparison).
template <typename Vec>
arma::uword argmax_abs(const Vec &v)
{
    if (v.n_elem == 0)
        throw std::invalid_argument("argmax_abs: empty vector");
    arma::uword best = 0;
    double best_val = std::abs(v[0]);
    for (arma::uword i = 1; i < v.n_elem; ++i)
    {
        double val = std::abs(v[i]);
        if (val > best_val)
        {
            best_val = val;
            best = i;
        }
    }
    return best;
}

} // namespace bdce

#endif
