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

#include "tddens/statevector.hpp"

#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "tddens/fermion_model.hpp"

using namespace tddens;

namespace {

QubitHamiltonian fixture() { return jordan_wigner(load_model_file(TDDENS_FIXTURE)); }

Eigen::VectorXcd as_vector(StateVector const& s) {
    return Eigen::Map<Eigen::VectorXcd const>(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim()));
}

}  // namespace

TEST(prepare_basis_state, leftmost_character_is_mode_zero) {
    auto const s = prepare_basis_state("1100", 4);
    EXPECT_EQ(s.dim(), 16U);
    EXPECT_EQ(s[3], complex(1, 0));
    EXPECT_DOUBLE_EQ(s.norm(), 1.0);

    auto const zero = prepare_basis_state("0", 1);
    EXPECT_EQ(zero[0], complex(1, 0));
    EXPECT_EQ(zero[1], complex(0, 0));

    EXPECT_EQ(prepare_basis_state("11", 2)[3], complex(1, 0));
    EXPECT_EQ(prepare_basis_state("0010", 4)[4], complex(1, 0));

    EXPECT_THROW(prepare_basis_state("110", 4), std::invalid_argument);
    EXPECT_THROW(prepare_basis_state("1a00", 4), std::invalid_argument);
}

TEST(apply_pauli_exponential, closed_form_cases) {
    auto const zero = prepare_basis_state("0", 1);
    PauliTerm const x{1.0, PauliWord::from_string("X")};
    PauliTerm const z{1.0, PauliWord::from_string("Z")};

    auto const same = apply_pauli_exponential(zero, x, 0.0);
    EXPECT_LT(distance(same, zero), 1e-15);

    auto const phased = apply_pauli_exponential(zero, z, std::numbers::pi);
    EXPECT_NEAR(std::abs(phased[0] - std::polar(1.0, -std::numbers::pi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(phased[0]), 1.0, 1e-15);

    auto const flipped = apply_pauli_exponential(zero, x, std::numbers::pi / 2);
    EXPECT_NEAR(std::abs(flipped[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(flipped[1] - complex(0, -1)), 0.0, 1e-15);

    EXPECT_THROW(apply_pauli_exponential(prepare_basis_state("00", 2), x, 1.0), std::invalid_argument);
}

TEST(apply_pauli_exponential, matches_matrix_exponential_oracle) {
    std::mt19937_64 rng(11);
    char const letters[] = {'I', 'X', 'Y', 'Z'};
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::string w(3, 'I');
        for (auto& c : w) c = letters[pick(rng)];
        PauliTerm const term{angle(rng), PauliWord::from_string(w)};
        double const theta = angle(rng);
        auto const s = oracle::random_state(3, rng);
        Eigen::MatrixXcd const u = oracle::expm(complex(0, -theta * term.coefficient) * to_dense(term.word));
        Eigen::VectorXcd const expected = u * as_vector(s);
        auto const got = apply_pauli_exponential(s, term, theta);
        EXPECT_LT((as_vector(got) - expected).norm(), 1e-12) << w;
        EXPECT_NEAR(got.norm(), 1.0, 1e-12);
    }
}

TEST(trotter_evolve, exact_for_commuting_terms) {
    auto const h = QubitHamiltonian::from_terms(
        3, {{0.7, PauliWord::from_string("ZII")}, {-0.4, PauliWord::from_string("ZZI")}, {1.1, PauliWord::from_string("IZZ")}});
    std::mt19937_64 rng(3);
    auto const s = oracle::random_state(3, rng);
    for (int n : {1, 2, 5}) {
        auto const trotter = trotter_evolve(s, h, TrotterPlan::in_order(h, 1.7, n));
        EXPECT_LT(distance(trotter, exact_evolve(s, h, 1.7)), 1e-10);
    }
}

TEST(trotter_evolve, zero_time_is_identity) {
    auto const h = fixture();
    auto const s = prepare_basis_state("1100", 4);
    EXPECT_LT(distance(trotter_evolve(s, h, TrotterPlan::in_order(h, 0.0, 3)), s), 1e-15);
}

TEST(trotter_evolve, error_scales_first_order) {
    auto const h = fixture();
    auto const s = prepare_basis_state("1100", 4);
    auto const exact = exact_evolve(s, h, 3.0);
    double previous = 1e9;
    for (int n : {3, 6, 12, 24}) {
        auto const approx = trotter_evolve(s, h, TrotterPlan::in_order(h, 3.0, n));
        double const err = distance(approx, exact);
        EXPECT_LT(err, previous);
        if (previous < 1e9) {
            // Halving the step roughly halves the error.
            EXPECT_NEAR(previous / err, 2.0, 0.4);
        }
        previous = err;
        EXPECT_NEAR(approx.norm(), 1.0, 1e-10);
    }
}

TEST(trotter_evolve, custom_order_and_validation) {
    auto const h = fixture();
    auto const s = prepare_basis_state("1100", 4);
    std::vector<std::size_t> reversed(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) reversed[i] = h.size() - 1 - i;
    auto const a = trotter_evolve(s, h, TrotterPlan(1.0, 50, reversed));
    auto const b = trotter_evolve(s, h, TrotterPlan::in_order(h, 1.0, 50));
    EXPECT_LT(distance(a, b), 0.05);
    EXPECT_GT(distance(a, b), 0.0);

    EXPECT_THROW(TrotterPlan(1.0, 0, {}), std::invalid_argument);
    EXPECT_THROW(TrotterPlan(1.0, 1, {0, 0}), std::invalid_argument);
    EXPECT_THROW(trotter_evolve(s, h, TrotterPlan(1.0, 1, {0})), std::invalid_argument);
    EXPECT_THROW(trotter_evolve(prepare_basis_state("11", 2), h, TrotterPlan::in_order(h, 1.0, 1)),
                 std::invalid_argument);
}

TEST(exact_evolve, trivial_cases) {
    auto const s = prepare_basis_state("0", 1);
    auto const empty = QubitHamiltonian(1);
    EXPECT_LT(distance(exact_evolve(s, empty, 2.5), s), 1e-14);

    auto const z = QubitHamiltonian::from_terms(1, {{1.0, PauliWord::from_string("Z")}});
    for (double t : {0.3, 1.0, 4.2}) {
        auto const out = exact_evolve(s, z, t);
        EXPECT_NEAR(std::abs(out[0] - std::polar(1.0, -t)), 0.0, 1e-12);
    }
}

TEST(exact_evolve, conserves_energy_and_norm) {
    auto const h = fixture();
    auto const s = prepare_basis_state("1100", 4);
    ExactPropagator const prop(h);
    double const e0 = expectation(s, h);
    for (double t : {0.5, 1.5, 3.0}) {
        auto const st = prop.evolve(s, t);
        EXPECT_NEAR(expectation(st, h), e0, 1e-10);
        EXPECT_NEAR(st.norm(), 1.0, 1e-10);
    }
    Eigen::MatrixXcd const v = prop.eigenvectors();
    EXPECT_LT((v.adjoint() * v - Eigen::MatrixXcd::Identity(16, 16)).norm(), 1e-10);
}

TEST(exact_evolve, refuses_above_dense_limit) {
    auto const h = QubitHamiltonian::from_terms(4, {{1.0, PauliWord::from_string("ZIII")}});
    auto const s = prepare_basis_state("0000", 4);
    EXPECT_THROW(exact_evolve(s, h, 1.0, 8), std::invalid_argument);
    EXPECT_NO_THROW(exact_evolve(s, h, 1.0, 16));
}

TEST(density_expectation, basis_and_superposition) {
    auto const s = prepare_basis_state("1100", 4);
    EXPECT_DOUBLE_EQ(density_expectation(s, 0), 1.0);
    EXPECT_DOUBLE_EQ(density_expectation(s, 1), 1.0);
    EXPECT_DOUBLE_EQ(density_expectation(s, 3), 0.0);
    StateVector const plus(std::vector<complex>(4, complex(0.5, 0)));
    EXPECT_DOUBLE_EQ(density_expectation(plus, 0), 0.5);
    EXPECT_THROW(density_expectation(s, 4), std::out_of_range);
}

TEST(statevector_properties, complement_and_number_conservation) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto const s = oracle::random_state(4, rng);
        for (int p = 0; p < 4; ++p) {
            auto const flipped = apply_pauli(s, PauliWord::single(4, p, 'X'));
            EXPECT_NEAR(density_expectation(s, p), 1.0 - density_expectation(flipped, p), 1e-12);
        }
    }
    auto const h = fixture();
    auto const s = prepare_basis_state("1100", 4);
    for (double t : {0.4, 1.3, 3.0}) {
        auto const a = trotter_evolve(s, h, TrotterPlan::in_order(h, t, 3));
        auto const b = exact_evolve(s, h, t);
        double na = 0, nb = 0;
        for (int p = 0; p < 4; ++p) {
            na += density_expectation(a, p);
            nb += density_expectation(b, p);
        }
        EXPECT_NEAR(na, 2.0, 1e-8);
        EXPECT_NEAR(nb, 2.0, 1e-8);
    }
}
