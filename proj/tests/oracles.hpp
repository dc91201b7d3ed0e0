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

// Test-only reference implementations. None of these share code paths with
// the library routines they check.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tddens/fermion_model.hpp"
#include "tddens/smc.hpp"
#include "tddens/statevector.hpp"

namespace tddens::oracle {

/// a_p on the occupation-number Fock space: bit p of the basis index is the
/// occupation of mode p, and the sign counts occupied modes below p.
inline Eigen::MatrixXd annihilator(int p, int n_modes) {
    auto const dim = Eigen::Index{1} << n_modes;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (!((k >> p) & 1)) continue;
        int const below = std::popcount(static_cast<std::uint64_t>(k) & ((std::uint64_t{1} << p) - 1));
        a(k ^ (Eigen::Index{1} << p), k) = (below % 2) ? -1.0 : 1.0;
    }
    return a;
}

/// sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s by direct matrix products.
inline Eigen::MatrixXcd fermionic_dense(FermionHamiltonian const& h) {
    int const m = h.n_modes();
    std::vector<Eigen::MatrixXd> a, ad;
    for (int p = 0; p < m; ++p) {
        a.push_back(annihilator(p, m));
        ad.push_back(a.back().transpose());
    }
    auto const dim = Eigen::Index{1} << m;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (auto const& [k, v] : h.one_body()) out += v * ad[k[0]] * a[k[1]];
    for (auto const& [k, v] : h.two_body()) out += 0.5 * v * ad[k[0]] * ad[k[1]] * a[k[2]] * a[k[3]];
    return out.cast<std::complex<double>>();
}

inline Eigen::MatrixXcd total_number(int n_modes) {
    auto const dim = Eigen::Index{1} << n_modes;
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) n(k, k) = std::popcount(static_cast<std::uint64_t>(k));
    return n;
}

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXcd expm(Eigen::MatrixXcd const& a) {
    double const norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    Eigen::MatrixXcd const scaled = a / std::pow(2.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Random Hermitian, number-conserving Hamiltonian with both one- and
/// two-body parts. Only one member of each Hermitian pair is generated; the
/// constructor fills in the partner.
inline FermionHamiltonian random_hamiltonian(int n_modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(0.6);
    std::map<OneBodyKey, double> one;
    std::map<TwoBodyKey, double> two;
    for (int p = 0; p < n_modes; ++p) {
        for (int q = p; q < n_modes; ++q) {
            if (keep(rng)) one[{p, q}] = u(rng);
        }
    }
    for (int p = 0; p < n_modes; ++p)
        for (int q = 0; q < n_modes; ++q)
            for (int r = 0; r < n_modes; ++r)
                for (int s = 0; s < n_modes; ++s) {
                    TwoBodyKey const k{p, q, r, s};
                    TwoBodyKey const partner{s, r, q, p};
                    if (partner < k) continue;
                    if (keep(rng)) two[k] = u(rng);
                }
    return FermionHamiltonian(n_modes, one, two);
}

inline StateVector random_state(int n_qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> amps(std::size_t{1} << n_qubits);
    double norm = 0;
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return StateVector(std::move(amps));
}

/// Expected posterior variance after one experiment, by explicitly
/// reweighting the particles for each outcome.
inline double brute_force_risk(ParticleCloud const& cloud, double tau) {
    double risk = 0;
    for (int d = 0; d < 2; ++d) {
        double z = 0, m1 = 0, m2 = 0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            double const x = cloud.positions()[i];
            double const w = cloud.weights()[i] * smc_likelihood(d, x, tau);
            z += w;
            m1 += w * x;
            m2 += w * x * x;
        }
        if (z <= 0) continue;
        double const mean = m1 / z;
        risk += z * (m2 / z - mean * mean);
    }
    return risk;
}

}  // namespace tddens::oracle
