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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tddens/errors.hpp"
#include "tddens/pauli.hpp"

namespace tddens {

inline constexpr std::size_t kDefaultDenseLimit = std::size_t{1} << 12;

/// Dense register of 2^M amplitudes. Basis index bit q holds qubit (mode) q.
class StateVector {
   public:
    StateVector() = default;

    /// Takes ownership of `amplitudes`; the size must be a power of two. No
    /// normalization is applied.
    explicit StateVector(std::vector<complex> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.empty() || !std::has_single_bit(amps_.size())) {
            throw std::invalid_argument("StateVector: size must be a nonzero power of two");
        }
        n_qubits_ = std::countr_zero(amps_.size());
        if (n_qubits_ > kMaxQubits) throw std::invalid_argument("StateVector: too many qubits");
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<complex const> amplitudes() const { return amps_; }
    complex operator[](std::size_t k) const { return amps_[k]; }

    double norm() const {
        double s = 0;
        for (auto const& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

   private:
    friend struct StateVectorAccess;
    int n_qubits_ = 0;
    std::vector<complex> amps_;
};

/// Mutable access for the evolution kernels in this header.
struct StateVectorAccess {
    static std::vector<complex>& amps(StateVector& s) { return s.amps_; }
};

/// `occupations[i]` is '1' if mode i is occupied; the leftmost character is
/// mode 0, so "1100" sets bits 0 and 1 (index 3).
inline StateVector prepare_basis_state(std::string_view occupations, int n_modes) {
    if (n_modes < 1 || n_modes > kMaxQubits) throw std::invalid_argument("prepare_basis_state: bad mode count");
    if (occupations.size() != static_cast<std::size_t>(n_modes)) {
        throw std::invalid_argument("prepare_basis_state: pattern length " + std::to_string(occupations.size()) +
                                    " does not match " + std::to_string(n_modes) + " modes");
    }
    std::size_t index = 0;
    for (std::size_t q = 0; q < occupations.size(); ++q) {
        if (occupations[q] == '1') {
            index |= std::size_t{1} << q;
        } else if (occupations[q] != '0') {
            throw std::invalid_argument("prepare_basis_state: pattern must be 0/1 characters");
        }
    }
    std::vector<complex> amps(std::size_t{1} << n_modes, complex{0, 0});
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

namespace detail {

inline void check_width(StateVector const& s, int n_qubits, char const* who) {
    if (s.n_qubits() != n_qubits) {
        throw std::invalid_argument(std::string(who) + ": state has " + std::to_string(s.n_qubits()) +
                                    " qubits, operator has " + std::to_string(n_qubits));
    }
}

/// amps <- exp(-i theta P) amps, using P^2 = I.
inline void exp_pauli_inplace(std::vector<complex>& amps, PauliWord const& w, double theta) {
    double const c = std::cos(theta);
    double const s = std::sin(theta);
    if (w.is_identity()) {
        complex const phase{c, -s};
        for (auto& a : amps) a *= phase;
        return;
    }
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    // -i * i^{#Y}
    complex const base = complex{0, -1} * kIPow[w.y_count() % 4];
    std::uint64_t const flip = w.x_mask();
    std::uint64_t const zmask = w.z_mask();
    if (flip == 0) {
        // Diagonal: P|k> = sign(k)|k>.
        for (std::size_t k = 0; k < amps.size(); ++k) {
            double const sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
            amps[k] *= complex{c, -s * sign};
        }
        return;
    }
    // Pair k with k ^ flip; visit each pair once via its lower member.
    for (std::size_t k = 0; k < amps.size(); ++k) {
        std::size_t const j = k ^ flip;
        if (j < k) continue;
        double const sign_k = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
        double const sign_j = (std::popcount(j & zmask) & 1) ? -1.0 : 1.0;
        complex const ak = amps[k];
        complex const aj = amps[j];
        amps[j] = c * aj + s * base * sign_k * ak;
        amps[k] = c * ak + s * base * sign_j * aj;
    }
}

}  // namespace detail

/// exp(-i * angle * coefficient * P) |s>.
inline StateVector apply_pauli_exponential(StateVector const& s, PauliTerm const& term, double angle) {
    detail::check_width(s, term.word.n_qubits(), "apply_pauli_exponential");
    StateVector out = s;
    detail::exp_pauli_inplace(StateVectorAccess::amps(out), term.word, angle * term.coefficient);
    return out;
}

/// P |s> for a bare Pauli word.
inline StateVector apply_pauli(StateVector const& s, PauliWord const& w) {
    detail::check_width(s, w.n_qubits(), "apply_pauli");
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    complex const base = kIPow[w.y_count() % 4];
    std::vector<complex> out(s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) {
        double const sign = (std::popcount(k & w.z_mask()) & 1) ? -1.0 : 1.0;
        out[k ^ w.x_mask()] = base * sign * s[k];
    }
    return StateVector(std::move(out));
}

/// First-order product formula parameters. `term_order` lists every term index
/// exactly once; the exponentials of one step are applied in that order.
class TrotterPlan {
   public:
    TrotterPlan(double total_time, int n_steps, std::vector<std::size_t> term_order)
        : total_time_(total_time), n_steps_(n_steps), term_order_(std::move(term_order)) {
        if (n_steps < 1) throw std::invalid_argument("TrotterPlan: n_steps must be >= 1");
        if (!std::isfinite(total_time)) throw std::invalid_argument("TrotterPlan: non-finite time");
        std::vector<std::size_t> sorted = term_order_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i) throw std::invalid_argument("TrotterPlan: term_order is not a permutation");
        }
    }

    /// Terms in the order the Hamiltonian stores them.
    static TrotterPlan in_order(QubitHamiltonian const& h, double total_time, int n_steps) {
        std::vector<std::size_t> order(h.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        return TrotterPlan(total_time, n_steps, std::move(order));
    }

    double total_time() const { return total_time_; }
    int n_steps() const { return n_steps_; }
    std::vector<std::size_t> const& term_order() const { return term_order_; }

   private:
    double total_time_;
    int n_steps_;
    std::vector<std::size_t> term_order_;
};

inline StateVector trotter_evolve(StateVector const& s, QubitHamiltonian const& h, TrotterPlan const& plan) {
    detail::check_width(s, h.n_qubits(), "trotter_evolve");
    if (plan.term_order().size() != h.size()) {
        throw std::invalid_argument("trotter_evolve: plan does not cover the Hamiltonian's terms");
    }
    StateVector out = s;
    auto& amps = StateVectorAccess::amps(out);
    double const dt = plan.total_time() / plan.n_steps();
    for (int step = 0; step < plan.n_steps(); ++step) {
        for (std::size_t idx : plan.term_order()) {
            auto const& term = h.terms()[idx];
            detail::exp_pauli_inplace(amps, term.word, dt * term.coefficient);
        }
    }
    return out;
}

/// Eigendecomposition of a dense Hamiltonian, reusable across times.
class ExactPropagator {
   public:
    explicit ExactPropagator(QubitHamiltonian const& h, std::size_t dense_limit = kDefaultDenseLimit)
        : n_qubits_(h.n_qubits()) {
        if (h.n_qubits() > kMaxQubits || (std::size_t{1} << h.n_qubits()) > dense_limit) {
            throw std::invalid_argument("exact_evolve: 2^" + std::to_string(h.n_qubits()) +
                                        " amplitudes exceed the dense limit of " + std::to_string(dense_limit));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h));
        if (solver.info() != Eigen::Success) throw NumericalError("exact_evolve: eigensolver failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    int n_qubits() const { return n_qubits_; }
    Eigen::VectorXd const& energies() const { return energies_; }
    Eigen::MatrixXcd const& eigenvectors() const { return vectors_; }

    /// sum_k e^{-i E_k t} |k><k| s
    StateVector evolve(StateVector const& s, double t) const {
        detail::check_width(s, n_qubits_, "exact_evolve");
        Eigen::Map<Eigen::VectorXcd const> psi(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim()));
        Eigen::VectorXcd coeffs = vectors_.adjoint() * psi;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, -energies_(k) * t);
        Eigen::VectorXcd out = vectors_ * coeffs;
        return StateVector(std::vector<complex>(out.data(), out.data() + out.size()));
    }

   private:
    int n_qubits_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

inline StateVector exact_evolve(StateVector const& s, QubitHamiltonian const& h, double t,
                                std::size_t dense_limit = kDefaultDenseLimit) {
    detail::check_width(s, h.n_qubits(), "exact_evolve");
    return ExactPropagator(h, dense_limit).evolve(s, t);
}

/// <n_p> = sum of |amplitude|^2 over basis states with bit p set.
inline double density_expectation(StateVector const& s, int p) {
    if (p < 0 || p >= s.n_qubits()) throw std::out_of_range("density_expectation: mode index out of range");
    std::size_t const bit = std::size_t{1} << p;
    double n = 0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
        if (k & bit) n += std::norm(s[k]);
    }
    return std::clamp(n, 0.0, 1.0);
}

/// <s|H|s>, real for Hermitian H.
inline double expectation(StateVector const& s, QubitHamiltonian const& h) {
    detail::check_width(s, h.n_qubits(), "expectation");
    double e = 0;
    for (auto const& t : h.terms()) {
        StateVector const ps = apply_pauli(s, t.word);
        complex acc{0, 0};
        for (std::size_t k = 0; k < s.dim(); ++k) acc += std::conj(s[k]) * ps[k];
        e += t.coefficient * acc.real();
    }
    return e;
}

/// 2-norm of the difference of two states.
inline double distance(StateVector const& a, StateVector const& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0;
    for (std::size_t k = 0; k < a.dim(); ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
}

}  // namespace tddens
