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
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "tddens/errors.hpp"
#include "tddens/estimate.hpp"
#include "tddens/measurement.hpp"

namespace tddens {

/// Weighted particle approximation of the posterior over theta = <n_p> in [0, 1].
class ParticleCloud {
   public:
    ParticleCloud() = default;

    /// Weights are normalized on construction.
    ParticleCloud(std::vector<double> positions, std::vector<double> weights)
        : positions_(std::move(positions)), weights_(std::move(weights)) {
        if (positions_.empty() || positions_.size() != weights_.size()) {
            throw std::invalid_argument("ParticleCloud: need equal, nonzero numbers of positions and weights");
        }
        double total = 0;
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            if (!(positions_[i] >= 0.0 && positions_[i] <= 1.0)) {
                throw std::invalid_argument("ParticleCloud: position outside [0, 1]");
            }
            if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
                throw std::invalid_argument("ParticleCloud: weights must be finite and nonnegative");
            }
            total += weights_[i];
        }
        if (!(total > 0.0)) throw DegeneratePosteriorError("ParticleCloud: total weight is zero");
        for (auto& w : weights_) w /= total;
    }

    /// Equal weights on the given positions.
    static ParticleCloud uniform(std::vector<double> positions) {
        std::vector<double> w(positions.size(), 1.0);
        return ParticleCloud(std::move(positions), std::move(w));
    }

    /// n particles drawn from the uniform prior on [0, 1].
    static ParticleCloud from_prior(std::size_t n, Rng& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> pos(n);
        for (auto& x : pos) x = u(rng);
        return uniform(std::move(pos));
    }

    std::size_t size() const { return positions_.size(); }
    std::vector<double> const& positions() const { return positions_; }
    std::vector<double> const& weights() const { return weights_; }

    /// Weighted raw moment E[theta^k].
    double moment(int k) const {
        double m = 0;
        for (std::size_t i = 0; i < size(); ++i) m += weights_[i] * std::pow(positions_[i], k);
        return m;
    }
    double mean() const { return moment(1); }
    double variance() const {
        double const mu = mean();
        double v = 0;
        for (std::size_t i = 0; i < size(); ++i) v += weights_[i] * (positions_[i] - mu) * (positions_[i] - mu);
        return v;
    }
    double effective_sample_size() const {
        double s = 0;
        for (double w : weights_) s += w * w;
        return 1.0 / s;
    }

   private:
    std::vector<double> positions_;
    std::vector<double> weights_;
};

struct ExperimentDesign {
    double tau = 0.0;
};

struct SmcOptions {
    /// Liu-West shrinkage a; the kernel bandwidth is h^2 = 1 - a^2.
    double liu_west_a = 0.98;
    /// Resample when ESS < threshold * particle count.
    double resample_threshold = 0.5;
    /// Candidate evolution angles for experiment design.
    std::vector<double> tau_grid = default_tau_grid();
    /// Redraws per particle before a Liu-West proposal is clamped into [0, 1].
    int max_redraws = 100;

    /// 64 points uniform on (0, 2 pi].
    static std::vector<double> default_tau_grid(std::size_t n = 64) {
        std::vector<double> g(n);
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(n);
        }
        return g;
    }
};

/// P(d | theta; tau) = delta_{d,0} + ((-1)^d / 2) (cos tau - 1) theta.
inline double smc_likelihood(int d, double theta, double tau) {
    double const shift = 0.5 * (std::cos(tau) - 1.0) * theta;
    double const p = d == 0 ? 1.0 + shift : -shift;
    return std::clamp(p, 0.0, 1.0);
}

namespace detail {

/// Liu-West resampling: parents drawn by weight, moved toward the mean by a,
/// jittered with variance (1 - a^2) Var. Preserves mean and variance.
inline ParticleCloud liu_west_resample(ParticleCloud const& cloud, Rng& rng, SmcOptions const& opts) {
    double const a = opts.liu_west_a;
    double const mu = cloud.mean();
    double const sd = std::sqrt(std::max(0.0, (1.0 - a * a) * cloud.variance()));
    std::discrete_distribution<std::size_t> pick(cloud.weights().begin(), cloud.weights().end());
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::vector<double> pos(cloud.size());
    for (auto& x : pos) {
        double const centre = a * cloud.positions()[pick(rng)] + (1.0 - a) * mu;
        double proposal = centre;
        if (sd > 0.0) {
            int tries = 0;
            do {
                proposal = centre + sd * jitter(rng);
            } while ((proposal < 0.0 || proposal > 1.0) && ++tries < opts.max_redraws);
        }
        x = std::clamp(proposal, 0.0, 1.0);
    }
    return ParticleCloud::uniform(std::move(pos));
}

}  // namespace detail

/// Multiplies in the likelihood of outcome d at tau, renormalizes, and applies
/// Liu-West resampling if the effective sample size drops below the threshold.
inline ParticleCloud smc_update(ParticleCloud const& cloud, int d, double tau, Rng& rng, SmcOptions const& opts = {}) {
    if (d != 0 && d != 1) throw std::invalid_argument("smc_update: outcome must be 0 or 1");
    std::vector<double> w(cloud.size());
    double total = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        w[i] = cloud.weights()[i] * smc_likelihood(d, cloud.positions()[i], tau);
        total += w[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DegeneratePosteriorError("smc_update: every particle has zero likelihood");
    }
    ParticleCloud updated(cloud.positions(), std::move(w));
    if (updated.effective_sample_size() < opts.resample_threshold * static_cast<double>(updated.size())) {
        return detail::liu_west_resample(updated, rng, opts);
    }
    return updated;
}

/// Expected posterior variance after one experiment at tau. The likelihood is
/// linear in theta, so the posterior moments after either outcome follow from
/// the first three raw moments of the current cloud.
inline double bayes_risk(double m1, double m2, double m3, double tau) {
    double const c = 0.5 * (1.0 - std::cos(tau));  // P(d = 1 | theta) = c theta
    double risk = 0;
    double const p1 = c * m1;
    if (p1 > 0.0) {
        double const mean1 = m2 / m1;
        risk += p1 * std::max(0.0, m3 / m1 - mean1 * mean1);
    }
    double const p0 = 1.0 - p1;
    if (p0 > 0.0) {
        double const mean0 = (m1 - c * m2) / p0;
        risk += p0 * std::max(0.0, (m2 - c * m3) / p0 - mean0 * mean0);
    }
    return risk;
}

inline double bayes_risk(ParticleCloud const& cloud, double tau) {
    return bayes_risk(cloud.moment(1), cloud.moment(2), cloud.moment(3), tau);
}

/// The grid point with the smallest Bayes risk; ties go to the earlier point.
inline ExperimentDesign design_experiment(ParticleCloud const& cloud, std::vector<double> const& tau_grid) {
    if (tau_grid.empty()) throw std::invalid_argument("design_experiment: empty candidate grid");
    double m1 = 0, m2 = 0, m3 = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double const x = cloud.positions()[i];
        double const w = cloud.weights()[i];
        m1 += w * x;
        m2 += w * x * x;
        m3 += w * x * x * x;
    }
    ExperimentDesign best{tau_grid.front()};
    double best_risk = bayes_risk(m1, m2, m3, best.tau);
    for (std::size_t k = 1; k < tau_grid.size(); ++k) {
        double const r = bayes_risk(m1, m2, m3, tau_grid[k]);
        if (r < best_risk) {
            best_risk = r;
            best.tau = tau_grid[k];
        }
    }
    return best;
}

inline ExperimentDesign design_experiment(ParticleCloud const& cloud, SmcOptions const& opts = {}) {
    return design_experiment(cloud, opts.tau_grid);
}

/// Returns the measured ancilla bit for an experiment at tau.
using OutcomeSampler = std::function<int(double tau)>;

inline constexpr std::size_t kMinParticles = 100;

/// Sequential Monte Carlo estimate of theta starting from the uniform prior:
/// design -> query -> update, n_experiments times. Value is the posterior
/// mean, std_error the posterior standard deviation.
inline DensityEstimate smc_estimate(OutcomeSampler const& sampler, std::size_t n_particles,
                                    std::int64_t n_experiments, std::uint64_t seed, SmcOptions const& opts = {}) {
    if (n_particles < kMinParticles) throw std::invalid_argument("smc_estimate: need at least 100 particles");
    if (n_experiments < 1) throw std::invalid_argument("smc_estimate: need at least one experiment");
    Rng rng(seed);
    ParticleCloud cloud = ParticleCloud::from_prior(n_particles, rng);
    for (std::int64_t e = 0; e < n_experiments; ++e) {
        double const tau = design_experiment(cloud, opts).tau;
        int const d = sampler(tau);
        cloud = smc_update(cloud, d, tau, rng, opts);
    }
    return make_estimate(cloud.mean(), std::sqrt(cloud.variance()), n_experiments, Method::Bayesian);
}

/// Single-shot Hadamard-test sampler for a fixed density, with readout flips.
class HadamardTestSampler {
   public:
    HadamardTestSampler(double density, NoiseModel noise, std::uint64_t seed)
        : density_(density), noise_(noise), rng_(seed) {
        if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("HadamardTestSampler: bad density");
    }

    int operator()(double tau) {
        double const p0 = apply_readout_flip(smc_likelihood(0, density_, tau), noise_);
        return uniform_(rng_) < p0 ? 0 : 1;
    }

   private:
    double density_;
    NoiseModel noise_;
    Rng rng_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace tddens
