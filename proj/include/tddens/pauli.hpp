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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tddens/errors.hpp"

namespace tddens {

using complex = std::complex<double>;

inline constexpr int kMaxQubits = 63;
inline constexpr double kDefaultDropTolerance = 1e-12;

/// A tensor product of single-qubit Paulis stored as X/Z bit masks.
/// Bit q of the masks refers to qubit q; X = (1,0), Z = (0,1), Y = (1,1).
/// Printed words put qubit 0 first, so "IIZI" is Z on qubit 2.
class PauliWord {
   public:
    PauliWord() = default;

    explicit PauliWord(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 0 || n_qubits > kMaxQubits) {
            throw std::invalid_argument("PauliWord: qubit count out of range");
        }
    }

    PauliWord(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask) : PauliWord(n_qubits) {
        std::uint64_t const valid = n_qubits == 64 ? ~0ULL : (1ULL << n_qubits) - 1;
        if ((x_mask & ~valid) != 0 || (z_mask & ~valid) != 0) {
            throw std::invalid_argument("PauliWord: mask touches qubits beyond n_qubits");
        }
        x_ = x_mask;
        z_ = z_mask;
    }

    static PauliWord from_string(std::string_view letters) {
        PauliWord w(static_cast<int>(letters.size()));
        for (std::size_t q = 0; q < letters.size(); ++q) {
            w.set(static_cast<int>(q), letters[q]);
        }
        return w;
    }

    static PauliWord single(int n_qubits, int qubit, char letter) {
        PauliWord w(n_qubits);
        w.set(qubit, letter);
        return w;
    }

    int n_qubits() const { return n_qubits_; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }
    bool is_identity() const { return x_ == 0 && z_ == 0; }

    char letter(int qubit) const {
        bool const x = (x_ >> qubit) & 1U;
        bool const z = (z_ >> qubit) & 1U;
        if (x && z) return 'Y';
        if (x) return 'X';
        if (z) return 'Z';
        return 'I';
    }

    void set(int qubit, char letter) {
        if (qubit < 0 || qubit >= n_qubits_) {
            throw std::out_of_range("PauliWord: qubit index out of range");
        }
        std::uint64_t const bit = 1ULL << qubit;
        x_ &= ~bit;
        z_ &= ~bit;
        switch (letter) {
            case 'I': case '_': break;
            case 'X': x_ |= bit; break;
            case 'Y': x_ |= bit; z_ |= bit; break;
            case 'Z': z_ |= bit; break;
            default: throw std::invalid_argument(std::string("PauliWord: bad letter '") + letter + "'");
        }
    }

    std::string str() const {
        std::string out(static_cast<std::size_t>(n_qubits_), 'I');
        for (int q = 0; q < n_qubits_; ++q) out[static_cast<std::size_t>(q)] = letter(q);
        return out;
    }

    /// Number of Y letters; P|k> = i^{#Y} (-1)^{popcount(k & z)} |k ^ x>.
    int y_count() const { return std::popcount(x_ & z_); }

    friend bool operator==(PauliWord const&, PauliWord const&) = default;

    /// Letter-by-letter from qubit 0, I < X < Y < Z.
    friend bool operator<(PauliWord const& a, PauliWord const& b) {
        if (a.n_qubits_ != b.n_qubits_) return a.n_qubits_ < b.n_qubits_;
        for (int q = 0; q < a.n_qubits_; ++q) {
            int const la = letter_rank(a.letter(q));
            int const lb = letter_rank(b.letter(q));
            if (la != lb) return la < lb;
        }
        return false;
    }

   private:
    static int letter_rank(char c) {
        switch (c) {
            case 'X': return 1;
            case 'Y': return 2;
            case 'Z': return 3;
            default: return 0;
        }
    }

    int n_qubits_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

/// Product of two words: a * b = phase * result.
inline std::pair<complex, PauliWord> multiply(PauliWord const& a, PauliWord const& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("multiply: qubit count mismatch");
    }
    // i-power per (left, right) letter pair, I/X/Y/Z order.
    static constexpr int kPhase[4][4] = {
        {0, 0, 0, 0},
        {0, 0, 1, 3},  // XY = iZ, XZ = -iY
        {0, 3, 0, 1},  // YX = -iZ, YZ = iX
        {0, 1, 3, 0},  // ZX = iY, ZY = -iX
    };
    auto index = [](char c) {
        switch (c) {
            case 'X': return 1;
            case 'Y': return 2;
            case 'Z': return 3;
            default: return 0;
        }
    };
    int power = 0;
    for (int q = 0; q < a.n_qubits(); ++q) {
        power += kPhase[index(a.letter(q))][index(b.letter(q))];
    }
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    PauliWord result(a.n_qubits(), a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
    return {kIPow[power % 4], result};
}

/// Linear combination of Pauli words with complex coefficients, used while
/// building operators symbolically. Keys stay sorted, so iteration order is
/// deterministic.
class PauliSum {
   public:
    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
    PauliSum(PauliWord const& w, complex c) : n_qubits_(w.n_qubits()) { terms_[w] = c; }

    int n_qubits() const { return n_qubits_; }
    std::map<PauliWord, complex> const& terms() const { return terms_; }

    void add(PauliWord const& w, complex c) {
        check(w.n_qubits());
        terms_[w] += c;
    }

    PauliSum& operator+=(PauliSum const& other) {
        check(other.n_qubits_);
        for (auto const& [w, c] : other.terms_) terms_[w] += c;
        return *this;
    }

    PauliSum& operator*=(complex s) {
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }

    friend PauliSum operator*(PauliSum const& a, PauliSum const& b) {
        a.check(b.n_qubits_);
        PauliSum out(a.n_qubits_);
        for (auto const& [wa, ca] : a.terms_) {
            for (auto const& [wb, cb] : b.terms_) {
                auto [phase, w] = multiply(wa, wb);
                out.terms_[w] += phase * ca * cb;
            }
        }
        return out;
    }

    friend PauliSum operator*(complex s, PauliSum a) {
        a *= s;
        return a;
    }

   private:
    void check(int n) const {
        if (n != n_qubits_) throw std::invalid_argument("PauliSum: qubit count mismatch");
    }

    int n_qubits_ = 0;
    std::map<PauliWord, complex> terms_;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliWord word;
};

/// Hermitian operator as a real-weighted sum of distinct Pauli words.
class QubitHamiltonian {
   public:
    QubitHamiltonian() = default;

    explicit QubitHamiltonian(int n_qubits) : n_qubits_(n_qubits) {}

    /// Terms are merged by word and pruned below `drop_tolerance`. Throws
    /// NumericalError if any surviving coefficient has an imaginary part above
    /// `drop_tolerance`, which means the source operator was not Hermitian.
    static QubitHamiltonian from_sum(PauliSum const& sum, double drop_tolerance = kDefaultDropTolerance) {
        QubitHamiltonian h(sum.n_qubits());
        for (auto const& [w, c] : sum.terms()) {
            if (std::abs(c.imag()) > drop_tolerance) {
                throw NumericalError("QubitHamiltonian: non-Hermitian residual " + std::to_string(c.imag()) +
                                     " on " + w.str());
            }
            if (std::abs(c.real()) >= drop_tolerance) h.terms_.push_back({c.real(), w});
        }
        return h;
    }

    static QubitHamiltonian from_terms(int n_qubits, std::vector<PauliTerm> const& terms,
                                       double drop_tolerance = kDefaultDropTolerance) {
        PauliSum sum(n_qubits);
        for (auto const& t : terms) sum.add(t.word, t.coefficient);
        return from_sum(sum, drop_tolerance);
    }

    int n_qubits() const { return n_qubits_; }
    std::vector<PauliTerm> const& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Coefficient of `word`, zero if absent.
    double coefficient(std::string_view word) const {
        auto const w = PauliWord::from_string(word);
        for (auto const& t : terms_) {
            if (t.word == w) return t.coefficient;
        }
        return 0.0;
    }

   private:
    int n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Dense matrix of a single Pauli word in the computational basis (qubit q is
/// bit q of the row/column index).
inline Eigen::MatrixXcd to_dense(PauliWord const& w) {
    std::size_t const dim = std::size_t{1} << w.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    static constexpr complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    complex const base = kIPow[w.y_count() % 4];
    for (std::size_t k = 0; k < dim; ++k) {
        double const sign = (std::popcount(k & w.z_mask()) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(k ^ w.x_mask()), static_cast<Eigen::Index>(k)) = base * sign;
    }
    return m;
}

inline Eigen::MatrixXcd to_dense(QubitHamiltonian const& h) {
    auto const dim = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto const& t : h.terms()) m += t.coefficient * to_dense(t.word);
    return m;
}

}  // namespace tddens
