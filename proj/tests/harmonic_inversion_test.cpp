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

#include "tddens/harmonic_inversion.hpp"

#include <numbers>

#include "gtest/gtest.h"
#include "tddens/measurement.hpp"

using namespace tddens;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> grid(std::size_t n, double tau_max) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = tau_max * static_cast<double>(k) / static_cast<double>(n - 1);
    return t;
}

std::vector<double> hadamard_signal(std::vector<double> const& taus, double n) {
    std::vector<double> y;
    for (double t : taus) y.push_back(1.0 - 0.5 * n + 0.5 * n * std::cos(t));
    return y;
}

}  // namespace

TEST(invert_harmonics, three_mode_cosine) {
    auto const taus = grid(40, 4 * std::numbers::pi * 0.99);
    std::vector<double> y;
    for (double t : taus) y.push_back(0.9 + 0.1 * std::cos(t));
    auto const modes = invert_harmonics(taus, y);
    ASSERT_EQ(modes.size(), 3U);
    EXPECT_NEAR(modes[0].frequency, -1 / kTwoPi, 1e-6);
    EXPECT_NEAR(modes[0].amplitude, 0.05, 1e-6);
    EXPECT_NEAR(modes[1].frequency, 0.0, 1e-6);
    EXPECT_NEAR(modes[1].amplitude, 0.9, 1e-6);
    EXPECT_NEAR(modes[2].frequency, 1 / kTwoPi, 1e-6);
    EXPECT_NEAR(modes[2].amplitude, 0.05, 1e-6);
    for (auto const& m : modes) {
        EXPECT_NEAR(m.decay, 0.0, 1e-6);
        EXPECT_FALSE(m.decay_clamped);
    }
    for (std::size_t k = 0; k < taus.size(); ++k) {
        EXPECT_NEAR(synthesize(modes, taus[k]).real(), y[k], 1e-9);
        EXPECT_NEAR(synthesize(modes, taus[k]).imag(), 0.0, 1e-9);
    }

    auto const e = density_from_modes(modes);
    EXPECT_NEAR(e.value, 0.2, 1e-6);
    ASSERT_TRUE(e.dc_density.has_value());
    EXPECT_NEAR(*e.dc_density, 0.2, 1e-6);
}

TEST(invert_harmonics, constant_signal_is_single_dc_mode) {
    auto const taus = grid(40, 4 * std::numbers::pi);
    std::vector<double> const y(40, 0.75);
    auto const modes = invert_harmonics(taus, y);
    ASSERT_EQ(modes.size(), 1U);
    EXPECT_NEAR(modes[0].amplitude, 0.75, 1e-12);
    EXPECT_NEAR(modes[0].frequency, 0.0, 1e-12);
    EXPECT_NEAR(modes[0].decay, 0.0, 1e-12);
}

TEST(invert_harmonics, decaying_mode) {
    auto const taus = grid(30, 6.0);
    std::vector<double> y;
    for (double t : taus) y.push_back(0.4 * std::exp(-0.3 * t) * std::cos(2.0 * t));
    auto const modes = invert_harmonics(taus, y);
    ASSERT_EQ(modes.size(), 2U);
    for (auto const& m : modes) {
        EXPECT_NEAR(m.amplitude, 0.2, 1e-8);
        EXPECT_NEAR(m.decay, 0.3, 1e-8);
        EXPECT_NEAR(std::abs(m.frequency), 2.0 / kTwoPi, 1e-8);
    }
}

TEST(invert_harmonics, rejects_bad_input) {
    auto const taus = grid(40, 4.0);
    std::vector<double> const y(40, 0.5);
    EXPECT_THROW(invert_harmonics(std::span(taus).first(7), std::span(y).first(7)), std::invalid_argument);
    EXPECT_THROW(invert_harmonics(taus, std::span(y).first(39)), std::invalid_argument);
    auto bent = taus;
    bent[10] += 1e-3;
    EXPECT_THROW(invert_harmonics(bent, y), std::invalid_argument);
    std::vector<double> const zeros(40, 0.0);
    EXPECT_THROW(invert_harmonics(taus, zeros), NumericalError);
}

TEST(density_from_modes, examples) {
    HarmonicMode dc;
    dc.amplitude = 1.0;
    std::vector<HarmonicMode> only_dc{dc};
    EXPECT_THROW(density_from_modes(only_dc), NoSignalError);

    HarmonicMode osc;
    osc.amplitude = 0.25;
    osc.frequency = 1 / kTwoPi;
    std::vector<HarmonicMode> full{osc};
    EXPECT_DOUBLE_EQ(density_from_modes(full).value, 1.0);
    EXPECT_THROW(density_from_modes(std::vector<HarmonicMode>{}), std::invalid_argument);
}

TEST(estimate_harmonic_inversion, round_trip_over_densities) {
    auto const taus = grid(40, 4 * std::numbers::pi);
    for (int k = 0; k <= 10; ++k) {
        double const n = 0.1 * k;
        auto const e = estimate_harmonic_inversion(taus, hadamard_signal(taus, n));
        EXPECT_EQ(e.method, Method::HarmonicInversion);
        if (k == 0) {
            EXPECT_TRUE(e.no_signal);
            EXPECT_TRUE(e.flagged());
            EXPECT_DOUBLE_EQ(e.value, 0.0);
            continue;
        }
        EXPECT_FALSE(e.no_signal);
        EXPECT_NEAR(e.value, n, 1e-6) << n;
        ASSERT_TRUE(e.dc_density.has_value());
        EXPECT_NEAR(*e.dc_density, n, 1e-6);
    }
}

TEST(estimate_harmonic_inversion, noisy_amplitude_is_calibrated) {
    auto const taus = grid(40, 4 * std::numbers::pi * 0.99);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<double> y;
        for (std::size_t k = 0; k < taus.size(); ++k) {
            double const p = 0.9 + 0.1 * std::cos(taus[k]);
            y.push_back(static_cast<double>(sample_shots(p, 3000, derive_seed(seed, {k})).successes) / 3000.0);
        }
        auto const modes = invert_harmonics(taus, y);
        HarmonicMode const* best = nullptr;
        for (auto const& m : modes) {
            if (std::abs(kTwoPi * m.frequency - 1.0) < 0.2 && (!best || m.amplitude > best->amplitude)) best = &m;
        }
        if (best && std::abs(best->amplitude - 0.05) <= 5 * best->amplitude_error) ++within;
    }
    EXPECT_GE(within, 95);
}
