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

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "tddens/errors.hpp"
#include "tddens/pauli.hpp"

namespace tddens {

using OneBodyKey = std::array<int, 2>;
using TwoBodyKey = std::array<int, 4>;

inline constexpr double kHermiticityTolerance = 1e-10;

/// Second-quantized Hamiltonian
///
///   H = sum_pq h_pq a+_p a_q + 1/2 sum_pqrs h_pqrs a+_p a+_q a_r a_s
///
/// with real coefficients. The 1/2 on the two-body part is applied by the
/// encoder; stored values are the bare h_pqrs. Construction symmetrizes the
/// tables so that h_pq = h_qp and h_pqrs = h_srqp. A partner that is missing is
/// filled in; a partner that disagrees by more than kHermiticityTolerance is
/// rejected with ModelError.
class FermionHamiltonian {
   public:
    FermionHamiltonian() = default;

    FermionHamiltonian(int n_modes, std::map<OneBodyKey, double> one_body,
                       std::map<TwoBodyKey, double> two_body = {})
        : n_modes_(n_modes) {
        if (n_modes < 1 || n_modes > kMaxQubits) {
            throw ModelError("FermionHamiltonian: mode count must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
        for (auto const& [k, v] : one_body) {
            check_indices(k);
            check_finite(v);
        }
        for (auto const& [k, v] : two_body) {
            check_indices(k);
            check_finite(v);
        }
        one_body_ = symmetrize(one_body, [](OneBodyKey const& k) { return OneBodyKey{k[1], k[0]}; });
        two_body_ = symmetrize(two_body, [](TwoBodyKey const& k) { return TwoBodyKey{k[3], k[2], k[1], k[0]}; });
    }

    int n_modes() const { return n_modes_; }
    std::map<OneBodyKey, double> const& one_body() const { return one_body_; }
    std::map<TwoBodyKey, double> const& two_body() const { return two_body_; }

   private:
    template <std::size_t N>
    void check_indices(std::array<int, N> const& key) const {
        for (int i : key) {
            if (i < 0 || i >= n_modes_) {
                throw ModelError("FermionHamiltonian: index " + std::to_string(i) + " outside [0, " +
                                 std::to_string(n_modes_) + ")");
            }
        }
    }

    static void check_finite(double v) {
        if (!std::isfinite(v)) throw ModelError("FermionHamiltonian: non-finite coefficient");
    }

    template <class Key, class Partner>
    static std::map<Key, double> symmetrize(std::map<Key, double> const& in, Partner partner) {
        std::map<Key, double> out;
        for (auto const& [k, v] : in) {
            Key const p = partner(k);
            auto const it = in.find(p);
            if (it == in.end()) {
                out[k] = v;
                out[p] = v;
                continue;
            }
            if (std::abs(it->second - v) > kHermiticityTolerance) {
                std::ostringstream msg;
                msg << "FermionHamiltonian: Hermiticity violated, entries differ by " << std::abs(it->second - v);
                throw ModelError(msg.str());
            }
            out[k] = 0.5 * (v + it->second);
        }
        return out;
    }

    int n_modes_ = 0;
    std::map<OneBodyKey, double> one_body_;
    std::map<TwoBodyKey, double> two_body_;
};

/// Parses the line-oriented integral format:
///
///   # comment
///   modes M
///   1body p q value
///   2body p q r s value
///
/// `modes` must precede every integral line and appear exactly once.
inline FermionHamiltonian load_model(std::string_view document) {
    std::istringstream in{std::string(document)};
    std::string line;
    int line_no = 0;
    int n_modes = -1;
    std::map<OneBodyKey, double> one_body;
    std::map<TwoBodyKey, double> two_body;

    auto fail = [&](std::string const& what) -> ModelError {
        return ModelError("model line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto const first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        auto read_index = [&]() {
            long long v = 0;
            if (!(fields >> v)) throw fail("expected integer index");
            if (v < 0 || v >= n_modes) throw fail("index " + std::to_string(v) + " out of range");
            return static_cast<int>(v);
        };
        auto read_value = [&]() {
            double v = 0;
            if (!(fields >> v)) throw fail("expected numeric value");
            return v;
        };
        auto expect_end = [&]() {
            std::string extra;
            if (fields >> extra) throw fail("trailing field '" + extra + "'");
        };

        if (tag == "modes") {
            if (n_modes != -1) throw fail("duplicate 'modes' header");
            long long m = 0;
            if (!(fields >> m) || m < 1 || m > kMaxQubits) throw fail("bad mode count");
            n_modes = static_cast<int>(m);
            expect_end();
        } else if (tag == "1body" || tag == "2body") {
            if (n_modes == -1) throw fail("'modes' header must come first");
            if (tag == "1body") {
                OneBodyKey k{read_index(), read_index()};
                double const v = read_value();
                expect_end();
                if (!one_body.emplace(k, v).second) throw fail("duplicate 1body entry");
            } else {
                TwoBodyKey k{read_index(), read_index(), read_index(), read_index()};
                double const v = read_value();
                expect_end();
                if (!two_body.emplace(k, v).second) throw fail("duplicate 2body entry");
            }
        } else {
            throw fail("unknown record '" + tag + "'");
        }
    }
    if (n_modes == -1) throw ModelError("model: missing 'modes' header");
    return FermionHamiltonian(n_modes, std::move(one_body), std::move(two_body));
}

inline FermionHamiltonian load_model_file(std::string const& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ModelError("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return load_model(buf.str());
}

namespace detail {

/// a_p (dagger = false) or a+_p as 1/2 (X_p +- i Y_p) Z_0 ... Z_{p-1}.
inline PauliSum ladder(int p, int n_modes, bool dagger) {
    PauliWord x = PauliWord::single(n_modes, p, 'X');
    PauliWord y = PauliWord::single(n_modes, p, 'Y');
    for (int q = 0; q < p; ++q) {
        x.set(q, 'Z');
        y.set(q, 'Z');
    }
    PauliSum out(n_modes);
    out.add(x, 0.5);
    out.add(y, dagger ? complex{0, -0.5} : complex{0, 0.5});
    return out;
}

}  // namespace detail

/// Jordan-Wigner encoding. Terms come out in PauliWord order, which fixes the
/// Trotter step ordering downstream.
inline QubitHamiltonian jordan_wigner(FermionHamiltonian const& h,
                                      double drop_tolerance = kDefaultDropTolerance) {
    int const m = h.n_modes();
    std::vector<PauliSum> create, annihilate;
    for (int p = 0; p < m; ++p) {
        create.push_back(detail::ladder(p, m, true));
        annihilate.push_back(detail::ladder(p, m, false));
    }
    PauliSum total(m);
    for (auto const& [k, v] : h.one_body()) {
        total += complex{v, 0} * (create[k[0]] * annihilate[k[1]]);
    }
    for (auto const& [k, v] : h.two_body()) {
        total += complex{0.5 * v, 0} * (create[k[0]] * create[k[1]] * annihilate[k[2]] * annihilate[k[3]]);
    }
    return QubitHamiltonian::from_sum(total, drop_tolerance);
}

/// n_p = a+_p a_p = (I - Z_p) / 2.
inline QubitHamiltonian number_operator(int p, int n_modes) {
    if (n_modes < 1 || n_modes > kMaxQubits) throw std::invalid_argument("number_operator: bad mode count");
    if (p < 0 || p >= n_modes) throw std::out_of_range("number_operator: mode index out of range");
    PauliSum sum(n_modes);
    sum.add(PauliWord(n_modes), 0.5);
    sum.add(PauliWord::single(n_modes, p, 'Z'), -0.5);
    return QubitHamiltonian::from_sum(sum);
}

}  // namespace tddens
