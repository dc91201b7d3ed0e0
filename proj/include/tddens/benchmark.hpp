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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tddens/direct_z.hpp"
#include "tddens/errors.hpp"
#include "tddens/estimate.hpp"
#include "tddens/harmonic_inversion.hpp"
#include "tddens/measurement.hpp"
#include "tddens/smc.hpp"
#include "tddens/statevector.hpp"

namespace tddens {

/// Defaults reproduce the reference protocol: 15 times on [0, 3], three
/// first-order Trotter steps, 3000 shots per point, 1% readout flips and 40
/// tau points on [0, 4 pi] for harmonic inversion.
struct ExperimentConfig {
    int site = 0;
    double t_max = 3.0;
    int t_points = 15;
    int trotter_steps = 3;
    std::int64_t shots = 3000;
    double epsilon = 0.01;
    int tau_points = 40;
    double tau_max = 4.0 * std::numbers::pi;
    std::size_t particles = 1000;
    std::int64_t experiments = 3000;
    /// Invert the readout channel in the direct-Z estimator.
    bool unbias_direct = false;
    HarmonicInversionOptions harminv;
    SmcOptions smc;
};

/// n evenly spaced points on [lo, hi], both ends included.
inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    double const step = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + step * k;
    return out;
}

struct DensityTrace {
    std::vector<double> times;
    std::vector<DensityEstimate> estimates;
    std::vector<double> reference;
    Method method = Method::DirectZ;
    /// Shots behind each estimate (per tau point for harmonic inversion).
    std::int64_t shots = 0;
    double epsilon = 0.0;

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (estimates.size() != times.size() || reference.size() != times.size()) {
            throw std::invalid_argument("DensityTrace: arrays differ in length");
        }
        for (std::size_t k = 1; k < times.size(); ++k) {
            if (!(times[k] > times[k - 1])) throw std::invalid_argument("DensityTrace: times not strictly increasing");
        }
    }
};

/// Noiseless density of mode p under the Trotterized propagator at each time.
inline std::vector<double> reference_trace(QubitHamiltonian const& h, StateVector const& initial,
                                           std::span<double const> times, int trotter_steps, int p) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(density_expectation(trotter_evolve(initial, h, TrotterPlan::in_order(h, t, trotter_steps)), p));
    }
    return out;
}

/// Hamiltonian, initial state, and the Trotterized states on the time grid.
class Experiment {
   public:
    Experiment(QubitHamiltonian h, StateVector initial, ExperimentConfig config)
        : h_(std::move(h)), initial_(std::move(initial)), config_(std::move(config)) {
        if (h_.n_qubits() != initial_.n_qubits()) throw std::invalid_argument("Experiment: width mismatch");
        if (config_.site < 0 || config_.site >= h_.n_qubits()) throw std::out_of_range("Experiment: site out of range");
        if (config_.t_points < 2) throw std::invalid_argument("Experiment: need at least two time points");
        if (!(config_.t_max > 0.0)) throw std::invalid_argument("Experiment: t_max must be positive");
        (void)NoiseModel{config_.epsilon};
        times_ = linspace(0.0, config_.t_max, config_.t_points);
        for (double t : times_) {
            states_.push_back(trotter_evolve(initial_, h_, TrotterPlan::in_order(h_, t, config_.trotter_steps)));
            reference_.push_back(density_expectation(states_.back(), config_.site));
        }
    }

    QubitHamiltonian const& hamiltonian() const { return h_; }
    ExperimentConfig const& config() const { return config_; }
    std::vector<double> const& times() const { return times_; }
    std::vector<StateVector> const& states() const { return states_; }
    std::vector<double> const& reference() const { return reference_; }
    NoiseModel noise() const { return NoiseModel{config_.epsilon}; }

    std::vector<double> tau_grid() const { return linspace(0.0, config_.tau_max, config_.tau_points); }

    /// Noisy finite-shot estimates of P(0|tau) on the tau grid for one state.
    std::vector<double> sample_signal(StateVector const& state, std::int64_t shots, std::uint64_t seed) const {
        auto const taus = tau_grid();
        std::vector<double> values;
        values.reserve(taus.size());
        for (std::size_t k = 0; k < taus.size(); ++k) {
            double const p0 = apply_readout_flip(hadamard_test_probability(state, config_.site, taus[k]), noise());
            auto const rec = sample_shots(p0, shots, derive_seed(seed, {k}));
            values.push_back(static_cast<double>(rec.successes) / static_cast<double>(shots));
        }
        return values;
    }

    /// One estimate at time index `k`; `shots` is the per-point budget (per tau
    /// point for harmonic inversion, experiments for the Bayesian method).
    DensityEstimate estimate_point(Method method, std::size_t k, std::int64_t shots, std::uint64_t seed) const {
        StateVector const& state = states_.at(k);
        std::uint64_t const stream = derive_seed(seed, {static_cast<std::uint64_t>(method), k});
        switch (method) {
            case Method::DirectZ: {
                double const p1 = apply_readout_flip(z_read_probability(state, config_.site), noise());
                auto const rec = sample_shots(p1, shots, stream);
                return config_.unbias_direct ? estimate_direct_z(rec, noise()) : estimate_direct_z(rec);
            }
            case Method::HarmonicInversion: {
                auto const taus = tau_grid();
                auto const values = sample_signal(state, shots, stream);
                return estimate_harmonic_inversion(taus, values, shots * static_cast<std::int64_t>(taus.size()),
                                                   config_.harminv);
            }
            case Method::Bayesian: {
                double const n = density_expectation(state, config_.site);
                HadamardTestSampler sampler(n, noise(), derive_seed(stream, {1}));
                return smc_estimate(std::ref(sampler), config_.particles, shots, derive_seed(stream, {2}),
                                    config_.smc);
            }
        }
        throw std::logic_error("estimate_point: unknown method");
    }

    DensityTrace estimate_trace(Method method, std::int64_t shots, std::uint64_t seed) const {
        DensityTrace trace{times_, {}, reference_, method, shots, config_.epsilon};
        trace.estimates.reserve(times_.size());
        for (std::size_t k = 0; k < times_.size(); ++k) trace.estimates.push_back(estimate_point(method, k, shots, seed));
        return trace;
    }

   private:
    QubitHamiltonian h_;
    StateVector initial_;
    ExperimentConfig config_;
    std::vector<double> times_;
    std::vector<StateVector> states_;
    std::vector<double> reference_;
};

/// L = sum_k |n_est(t_k) - n_ref(t_k)| / N.
inline double loss_l1(DensityTrace const& trace) {
    trace.validate();
    if (trace.size() == 0) throw EmptyTraceError("loss_l1: empty trace");
    double s = 0;
    for (std::size_t k = 0; k < trace.size(); ++k) s += std::abs(trace.estimates[k].value - trace.reference[k]);
    return s / static_cast<double>(trace.size());
}

/// Binomial standard error at the reference density, floored at eps / sqrt(shots).
inline double cleaning_sigma(double n_ref, std::int64_t shots, double epsilon) {
    double const m = static_cast<double>(shots);
    return std::max(std::sqrt(n_ref * (1.0 - n_ref) / m), epsilon / std::sqrt(m));
}

struct CleanedTrace {
    DensityTrace trace;
    double retained_fraction = 0.0;
    /// Boundary-flagged estimates among the retained points.
    std::size_t flagged_retained = 0;
};

/// Drops points farther than cutoff_sigmas * cleaning_sigma from the reference.
inline CleanedTrace clean_outliers(DensityTrace const& trace, double cutoff_sigmas = 5.0) {
    trace.validate();
    if (trace.size() == 0) throw EmptyTraceError("clean_outliers: empty trace");
    if (trace.shots <= 0) throw std::invalid_argument("clean_outliers: trace has no shot count");
    CleanedTrace out;
    out.trace.method = trace.method;
    out.trace.shots = trace.shots;
    out.trace.epsilon = trace.epsilon;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        double const sigma = cleaning_sigma(trace.reference[k], trace.shots, trace.epsilon);
        if (std::abs(trace.estimates[k].value - trace.reference[k]) > cutoff_sigmas * sigma) continue;
        out.trace.times.push_back(trace.times[k]);
        out.trace.estimates.push_back(trace.estimates[k]);
        out.trace.reference.push_back(trace.reference[k]);
        if (trace.estimates[k].flagged()) ++out.flagged_retained;
    }
    if (out.trace.size() == 0) throw EmptyTraceError("clean_outliers: every point was removed");
    out.retained_fraction = static_cast<double>(out.trace.size()) / static_cast<double>(trace.size());
    return out;
}

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
};

namespace detail {

inline LogLogFit ols_loglog(std::span<double const> xs, std::span<double const> ys) {
    std::size_t const n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log10(xs[i]);
        my += std::log10(ys[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double const dx = std::log10(xs[i]) - mx;
        sxy += dx * (std::log10(ys[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog_slope: x values are all equal");
    double const slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace detail

/// Least squares of log10 y on log10 x.
inline LogLogFit fit_loglog_slope(std::span<double const> xs, std::span<double const> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("fit_loglog_slope: need at least three points");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("fit_loglog_slope: inputs must be positive");
    }
    return detail::ols_loglog(xs, ys);
}

struct SweepResult {
    Method method = Method::DirectZ;
    std::vector<std::int64_t> trial_counts;
    /// Cleaned loss averaged over seeds, one per trial count.
    std::vector<double> losses;
    std::vector<double> retained_fraction;
    /// Mean number of boundary/no-signal flagged points kept after cleaning.
    std::vector<double> flagged_retained;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double fitted_intercept = std::numeric_limits<double>::quiet_NaN();
    std::size_t points_used = 0;
    std::size_t seed_count = 0;
};

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// thrown by any task is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

struct SweepOptions {
    double cutoff_sigmas = 5.0;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

/// For each method and per-point trial count, estimates the full trace once
/// per seed, cleans it, and averages the L1 loss over seeds; then fits
/// log10(loss) against log10(trials). For harmonic inversion the trial count
/// is per tau point.
inline std::vector<SweepResult> sweep_trials(Experiment const& experiment, std::span<std::int64_t const> trial_counts,
                                             std::span<std::uint64_t const> seeds,
                                             std::span<Method const> methods = kAllMethods,
                                             SweepOptions const& opts = {}) {
    if (trial_counts.empty() || seeds.empty() || methods.empty()) {
        throw std::invalid_argument("sweep_trials: empty trial counts, seeds or methods");
    }
    for (std::size_t i = 0; i < trial_counts.size(); ++i) {
        if (trial_counts[i] < 1 || (i > 0 && trial_counts[i] <= trial_counts[i - 1])) {
            throw std::invalid_argument("sweep_trials: trial counts must be positive and increasing");
        }
    }
    std::size_t const n_trials = trial_counts.size();
    std::size_t const n_seeds = seeds.size();
    std::size_t const cells = methods.size() * n_trials * n_seeds;
    struct Cell {
        double loss = 0;
        double retained = 0;
        double flagged = 0;
    };
    std::vector<Cell> results(cells);
    detail::parallel_for(cells, opts.threads, [&](std::size_t i) {
        std::size_t const m = i / (n_trials * n_seeds);
        std::size_t const t = (i / n_seeds) % n_trials;
        std::size_t const s = i % n_seeds;
        auto const trace = experiment.estimate_trace(methods[m], trial_counts[t], seeds[s]);
        auto const cleaned = clean_outliers(trace, opts.cutoff_sigmas);
        results[i] = {loss_l1(cleaned.trace), cleaned.retained_fraction,
                      static_cast<double>(cleaned.flagged_retained)};
    });

    std::vector<SweepResult> out;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        SweepResult r;
        r.method = methods[m];
        r.seed_count = n_seeds;
        r.trial_counts.assign(trial_counts.begin(), trial_counts.end());
        std::vector<double> xs, ys;
        for (std::size_t t = 0; t < n_trials; ++t) {
            Cell acc;
            for (std::size_t s = 0; s < n_seeds; ++s) {
                auto const& c = results[(m * n_trials + t) * n_seeds + s];
                acc.loss += c.loss;
                acc.retained += c.retained;
                acc.flagged += c.flagged;
            }
            double const ns = static_cast<double>(n_seeds);
            r.losses.push_back(acc.loss / ns);
            r.retained_fraction.push_back(acc.retained / ns);
            r.flagged_retained.push_back(acc.flagged / ns);
            if (r.losses.back() > 0.0) {
                xs.push_back(static_cast<double>(trial_counts[t]));
                ys.push_back(r.losses.back());
            }
        }
        r.points_used = xs.size();
        if (xs.size() >= 2) {
            auto const fit = detail::ols_loglog(xs, ys);
            r.fitted_slope = fit.slope;
            r.fitted_intercept = fit.intercept;
        }
        out.push_back(std::move(r));
    }
    return out;
}

// CSV output ---------------------------------------------------------------

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& out, std::span<DensityTrace const> traces) {
    out << "t,method,n_est,std_error,n_ref,shots,flagged\n";
    for (auto const& tr : traces) {
        tr.validate();
        for (std::size_t k = 0; k < tr.size(); ++k) {
            auto const& e = tr.estimates[k];
            out << format_number(tr.times[k]) << ',' << to_string(tr.method) << ',' << format_number(e.value) << ','
                << format_number(e.std_error) << ',' << format_number(tr.reference[k]) << ',' << tr.shots << ','
                << (e.flagged() ? 1 : 0) << '\n';
        }
    }
}

inline void write_sweep_csv(std::ostream& out, std::span<SweepResult const> results) {
    out << "method,trials,loss,retained_fraction,seed_count\n";
    for (auto const& r : results) {
        for (std::size_t t = 0; t < r.trial_counts.size(); ++t) {
            out << to_string(r.method) << ',' << r.trial_counts[t] << ',' << format_number(r.losses[t]) << ','
                << format_number(r.retained_fraction[t]) << ',' << r.seed_count << '\n';
        }
    }
}

inline void write_slope_csv(std::ostream& out, std::span<SweepResult const> results) {
    out << "method,slope,intercept,points_used\n";
    for (auto const& r : results) {
        out << to_string(r.method) << ',' << format_number(r.fitted_slope) << ',' << format_number(r.fitted_intercept)
            << ',' << r.points_used << '\n';
    }
}

}  // namespace tddens
