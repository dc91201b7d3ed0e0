// Copyright 2026 The tddens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

#include "tddens/statevector.hpp"

namespace tddens {

/// Every random draw in the library goes through this engine.
using Rng = std::mt19937_64;

/// Derives an independent stream seed from a base seed and integer tags
/// (method, time index, ...). Stable across runs and platforms.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
    for (auto t : tags) {
        words.push_back(static_cast<std::uint32_t>(t));
        words.push_back(static_cast<std::uint32_t>(t >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Symmetric readout flip acting on the measured bit.
class NoiseModel {
   public:
    explicit NoiseModel(double flip_probability = 0.0) : eps_(flip_probability) {
        if (!(flip_probability >= 0.0 && flip_probability < 0.5)) {
            throw std::invalid_argument("NoiseModel: flip probability must be in [0, 0.5)");
        }
    }
    double flip_probability() const { return eps_; }

   private:
    double eps_;
};

struct ShotRecord {
    std::int64_t shots = 0;
    std::int64_t successes = 0;
    std::uint64_t seed = 0;
};

/// Probability of reading 0 on the ancilla of the Hadamard test with
/// U2(tau) = exp(-i tau n_p). Since n_p has spectrum {0, 1}, the eigen-expansion
/// sum_k |c_k|^2 cos^2(E_k tau / 2) collapses to 1 - n/2 + (n/2) cos(tau).
inline double hadamard_test_probability(StateVector const& s, int p, double tau) {
    double const n = density_expectation(s, p);
    return std::clamp(1.0 - 0.5 * n + 0.5 * n * std::cos(tau), 0.0, 1.0);
}

/// Same quantity obtained by simulating the ancilla-extended register:
/// H on the ancilla, controlled exp(-i tau n_p), H, then P(ancilla = 0).
/// The ancilla is the most significant qubit.
inline double hadamard_test_probability_circuit(StateVector const& s, int p, double tau) {
    if (p < 0 || p >= s.n_qubits()) throw std::out_of_range("hadamard_test_probability: mode index out of range");
    std::size_t const dim = s.dim();
    std::size_t const bit = std::size_t{1} << p;
    double const r = 1.0 / std::sqrt(2.0);
    std::vector<complex> reg(2 * dim);
    for (std::size_t k = 0; k < dim; ++k) {
        reg[k] = r * s[k];
        reg[k + dim] = r * s[k];
    }
    complex const phase = std::polar(1.0, -tau);
    for (std::size_t k = 0; k < dim; ++k) {
        if (k & bit) reg[k + dim] *= phase;
    }
    double p0 = 0;
    for (std::size_t k = 0; k < dim; ++k) p0 += std::norm(r * (reg[k] + reg[k + dim]));
    return std::clamp(p0, 0.0, 1.0);
}

/// Probability of reading bit value 1 when measuring Z on qubit p.
inline double z_read_probability(StateVector const& s, int p) { return density_expectation(s, p); }

inline double apply_readout_flip(double p_true, NoiseModel const& noise) {
    double const eps = noise.flip_probability();
    return p_true * (1.0 - eps) + (1.0 - p_true) * eps;
}

/// Binomial(shots, p) draw; `successes` counts outcomes with probability p.
inline ShotRecord sample_shots(double p, std::int64_t shots, std::uint64_t seed) {
    if (shots <= 0) throw std::invalid_argument("sample_shots: shots must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_shots: probability outside [0, 1]");
    Rng rng(seed);
    std::binomial_distribution<std::int64_t> dist(shots, p);
    return ShotRecord{shots, dist(rng), seed};
}

}  // namespace tddens
