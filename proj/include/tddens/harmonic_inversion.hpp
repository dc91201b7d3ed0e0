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

// Harmonic inversion by the matrix-pencil method.
//
// A uniformly sampled signal is modelled as
//
//   f(tau) = sum_j A_j exp(-i (2 pi f_j tau - phi_j) - alpha_j tau).
//
// The Hankel matrix of the samples is truncated to its dominant singular
// subspace; the shift invariance of that subspace gives the poles
// z_j = exp(-(alpha_j + 2 pi i f_j) dtau), and a linear least-squares fit of the
// samples on the poles gives the complex amplitudes A_j exp(i phi_j).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tddens/errors.hpp"
#include "tddens/estimate.hpp"

namespace tddens {

struct HarmonicMode {
    double amplitude = 0.0;  // A_j >= 0
    double frequency = 0.0;  // cycles per unit tau
    double phase = 0.0;      // (-pi, pi]
    double decay = 0.0;      // >= 0 after clamping
    /// Least-squares standard error of the amplitude from the fit residual.
    double amplitude_error = 0.0;
    bool decay_clamped = false;
};

struct HarmonicInversionOptions {
    /// Singular values below this fraction of the largest are treated as noise.
    double rank_threshold = 1e-3;
    /// Pencil parameter L as a fraction of the sample count.
    double pencil_fraction = 0.5;
    double spacing_tolerance = 1e-9;
    /// Growth rates smaller than this are roundoff and are clamped silently.
    double growth_flag_threshold = 1e-9;
};

inline constexpr std::size_t kMinHarmonicSamples = 8;

namespace detail {

inline double check_uniform_grid(std::span<double const> taus, double rel_tol) {
    std::size_t const n = taus.size();
    double const step = (taus[n - 1] - taus[0]) / static_cast<double>(n - 1);
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("invert_harmonics: tau samples must be strictly increasing");
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs((taus[k + 1] - taus[k]) - step) > rel_tol * step) {
            throw std::invalid_argument("invert_harmonics: tau samples are not evenly spaced");
        }
    }
    return step;
}

}  // namespace detail

inline std::vector<HarmonicMode> invert_harmonics(std::span<double const> taus, std::span<double const> values,
                                                  HarmonicInversionOptions const& opts = {}) {
    using Eigen::Index;
    using Eigen::MatrixXcd;
    using Eigen::VectorXcd;

    if (taus.size() != values.size()) throw std::invalid_argument("invert_harmonics: tau/value length mismatch");
    if (taus.size() < kMinHarmonicSamples) {
        throw std::invalid_argument("invert_harmonics: need at least " + std::to_string(kMinHarmonicSamples) +
                                    " samples");
    }
    double const dtau = detail::check_uniform_grid(taus, opts.spacing_tolerance);

    auto const n = static_cast<Index>(values.size());
    Index pencil = static_cast<Index>(std::floor(opts.pencil_fraction * static_cast<double>(n)));
    pencil = std::clamp<Index>(pencil, 2, n - 2);

    MatrixXcd hankel(n - pencil, pencil + 1);
    for (Index i = 0; i < hankel.rows(); ++i) {
        for (Index j = 0; j < hankel.cols(); ++j) hankel(i, j) = values[static_cast<std::size_t>(i + j)];
    }

    Eigen::JacobiSVD<MatrixXcd> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto const& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || !std::isfinite(sv(0))) {
        throw NumericalError("invert_harmonics: no signal subspace (signal is identically zero)");
    }
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > opts.rank_threshold * sv(0)) ++rank;
    rank = std::min(rank, pencil);
    if (rank == 0) throw NumericalError("invert_harmonics: rank selection found no signal subspace");

    // Rows of the Hankel matrix lie in span{conj(V)}, whose columns are
    // combinations of (1, z_j, z_j^2, ...). Shifting by one row multiplies by z.
    MatrixXcd const basis = svd.matrixV().leftCols(rank).conjugate();
    MatrixXcd const upper = basis.topRows(pencil);
    MatrixXcd const lower = basis.bottomRows(pencil);
    MatrixXcd const shift = upper.completeOrthogonalDecomposition().solve(lower);
    Eigen::ComplexEigenSolver<MatrixXcd> eig(shift, false);
    if (eig.info() != Eigen::Success) throw NumericalError("invert_harmonics: pole eigensolver failed");

    VectorXcd rates(rank);
    for (Index j = 0; j < rank; ++j) {
        std::complex<double> const z = eig.eigenvalues()(j);
        if (std::abs(z) == 0.0 || !std::isfinite(std::abs(z))) {
            throw NumericalError("invert_harmonics: degenerate pole");
        }
        rates(j) = std::log(z) / dtau;
    }

    MatrixXcd vander(n, rank);
    VectorXcd y(n);
    for (Index k = 0; k < n; ++k) {
        y(k) = values[static_cast<std::size_t>(k)];
        for (Index j = 0; j < rank; ++j) vander(k, j) = std::exp(rates(j) * taus[static_cast<std::size_t>(k)]);
    }
    auto const lsq = vander.completeOrthogonalDecomposition();
    VectorXcd const amps = lsq.solve(y);
    double const rss = (y - vander * amps).squaredNorm();
    // Linearized covariance over amplitudes and rates together: the poles are
    // fitted to the same noisy samples, so amplitude-only errors are too small.
    MatrixXcd jac(n, 2 * rank);
    for (Index k = 0; k < n; ++k) {
        double const tau = taus[static_cast<std::size_t>(k)];
        for (Index j = 0; j < rank; ++j) {
            jac(k, j) = vander(k, j);
            jac(k, rank + j) = amps(j) * tau * vander(k, j);
        }
    }
    double const dof = std::max<double>(1.0, static_cast<double>(n - 2 * rank));
    MatrixXcd const gram_inv = (jac.adjoint() * jac).completeOrthogonalDecomposition().pseudoInverse();

    std::vector<HarmonicMode> modes;
    modes.reserve(static_cast<std::size_t>(rank));
    for (Index j = 0; j < rank; ++j) {
        HarmonicMode m;
        m.amplitude = std::abs(amps(j));
        m.phase = std::arg(amps(j));
        m.frequency = -rates(j).imag() / (2.0 * std::numbers::pi);
        double const decay = -rates(j).real();
        m.decay = std::max(decay, 0.0);
        m.decay_clamped = decay < -opts.growth_flag_threshold;
        m.amplitude_error = std::sqrt(std::max(0.0, rss / dof * gram_inv(j, j).real()));
        modes.push_back(m);
    }
    std::sort(modes.begin(), modes.end(), [](HarmonicMode const& a, HarmonicMode const& b) {
        if (a.frequency != b.frequency) return a.frequency < b.frequency;
        return a.amplitude < b.amplitude;
    });
    return modes;
}

/// Evaluates the mode model at tau.
inline std::complex<double> synthesize(std::span<HarmonicMode const> modes, double tau) {
    std::complex<double> out{0, 0};
    for (auto const& m : modes) {
        out += m.amplitude *
               std::exp(std::complex<double>{-m.decay * tau, -(2.0 * std::numbers::pi * m.frequency * tau - m.phase)});
    }
    return out;
}

/// Angular frequency of the density oscillation: the eigenvalue gap of n_p.
inline constexpr double kDensityAngularFrequency = 1.0;
inline constexpr double kDensityFrequencyWindow = 0.2;

/// Reads the density off the mode model of the Hadamard-test signal
/// P(0|tau) = A0 + A1 (e^{-i tau} + e^{i tau}) with A0 = 1 - n/2 and A1 = n/4,
/// so n = 4 A1 taken from one of the two conjugate modes at |2 pi f| = 1.
/// Throws NoSignalError if no mode falls inside the frequency window.
inline DensityEstimate density_from_modes(std::span<HarmonicMode const> modes, std::int64_t shots_used = 0) {
    if (modes.empty()) throw std::invalid_argument("density_from_modes: no modes");
    HarmonicMode const* osc = nullptr;
    HarmonicMode const* dc = nullptr;
    double best_osc = kDensityFrequencyWindow;
    double best_dc = kDensityFrequencyWindow;
    for (auto const& m : modes) {
        double const w = 2.0 * std::numbers::pi * std::abs(m.frequency);
        double const d_osc = std::abs(w - kDensityAngularFrequency);
        if (d_osc < best_osc) {
            best_osc = d_osc;
            osc = &m;
        }
        if (w < best_dc) {
            best_dc = w;
            dc = &m;
        }
    }
    if (osc == nullptr) throw NoSignalError("density_from_modes: no mode near the density frequency");
    DensityEstimate e =
        make_estimate(4.0 * osc->amplitude, 4.0 * osc->amplitude_error, shots_used, Method::HarmonicInversion);
    e.decay_clamped = osc->decay_clamped;
    if (dc != nullptr) e.dc_density = 2.0 * (1.0 - dc->amplitude);
    return e;
}

/// invert_harmonics + density_from_modes; a missing oscillation maps to
/// density 0 with the no_signal flag set.
inline DensityEstimate estimate_harmonic_inversion(std::span<double const> taus, std::span<double const> values,
                                                   std::int64_t shots_used = 0,
                                                   HarmonicInversionOptions const& opts = {}) {
    auto const modes = invert_harmonics(taus, values, opts);
    try {
        return density_from_modes(modes, shots_used);
    } catch (NoSignalError const&) {
        DensityEstimate e = make_estimate(0.0, 0.0, shots_used, Method::HarmonicInversion);
        e.no_signal = true;
        for (auto const& m : modes) {
            if (2.0 * std::numbers::pi * std::abs(m.frequency) < kDensityFrequencyWindow) {
                e.dc_density = 2.0 * (1.0 - m.amplitude);
                break;
            }
        }
        return e;
    }
}

}  // namespace tddens
