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

// Command-line front end: `tddens trace|signal|sweep [flags]`.
//
// Exit codes: 0 success, 1 usage, 2 data/model error, 3 numerical failure.

#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tddens/benchmark.hpp"
#include "tddens/errors.hpp"
#include "tddens/fermion_model.hpp"

namespace tddens::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

class UsageError : public Error {
   public:
    using Error::Error;
};

struct RunConfig {
    std::string model_path;
    int site = 0;
    double t_max = 3.0;
    int t_points = 15;
    int trotter_steps = 3;
    std::int64_t shots = 3000;
    std::string method = "all";
    double epsilon = 0.01;
    std::optional<std::uint64_t> seed;
    int tau_points = 40;
    double tau_max = 4.0 * std::numbers::pi;
    std::size_t particles = 1000;
    std::int64_t experiments = 3000;
    std::string output_path;
    std::string initial;  // empty: first two modes occupied
    bool unbias = false;
    bool ci = false;

    // signal
    double t = 2.8;

    // sweep
    std::vector<std::int64_t> trials = {64, 128, 256, 512, 1024, 2048, 4096};
    int seed_count = 5;
    std::string slope_path;
    double cutoff = 5.0;
    unsigned threads = 0;

    std::uint64_t seed_or_default() const { return seed.value_or(0); }

    void validate() const {
        auto require = [](bool ok, char const* what) {
            if (!ok) throw UsageError(what);
        };
        require(!model_path.empty(), "--model is required");
        require(site >= 0, "--site must be nonnegative");
        require(t_max > 0.0, "--t-max must be positive");
        require(t_points >= 2, "--t-points must be at least 2");
        require(trotter_steps >= 1, "--trotter-steps must be at least 1");
        require(shots >= 1, "--shots must be at least 1");
        require(epsilon >= 0.0 && epsilon < 0.5, "--epsilon must be in [0, 0.5)");
        require(tau_points >= static_cast<int>(kMinHarmonicSamples), "--tau-points must be at least 8");
        require(tau_max > 0.0, "--tau-max must be positive");
        require(particles >= kMinParticles, "--particles must be at least 100");
        require(experiments >= 1, "--experiments must be at least 1");
        require(method == "all" || method == "direct" || method == "harminv" || method == "bayes",
                "--method must be one of direct|harminv|bayes|all");
        require(!ci || seed.has_value(), "--seed is mandatory with --ci");
        require(seed_count >= 1, "--seed-count must be at least 1");
        require(cutoff > 0.0, "--cutoff must be positive");
        require(t >= 0.0, "--t must be nonnegative");
        for (std::size_t i = 0; i < trials.size(); ++i) {
            require(trials[i] >= 1 && (i == 0 || trials[i] > trials[i - 1]),
                    "--trials must be positive and strictly increasing");
        }
    }

    std::vector<Method> methods() const {
        if (method == "all") return {kAllMethods.begin(), kAllMethods.end()};
        return {parse_method(method)};
    }

    ExperimentConfig experiment_config() const {
        ExperimentConfig c;
        c.site = site;
        c.t_max = t_max;
        c.t_points = t_points;
        c.trotter_steps = trotter_steps;
        c.shots = shots;
        c.epsilon = epsilon;
        c.tau_points = tau_points;
        c.tau_max = tau_max;
        c.particles = particles;
        c.experiments = experiments;
        c.unbias_direct = unbias;
        return c;
    }

    std::string describe(std::string const& command) const {
        std::ostringstream o;
        o << "command = " << command << '\n'
          << "model = " << model_path << '\n'
          << "site = " << site << '\n'
          << "initial = " << initial << '\n'
          << "t_max = " << format_number(t_max) << '\n'
          << "t_points = " << t_points << '\n'
          << "trotter_steps = " << trotter_steps << '\n'
          << "shots = " << shots << '\n'
          << "method = " << method << '\n'
          << "epsilon = " << format_number(epsilon) << '\n'
          << "unbias = " << (unbias ? "true" : "false") << '\n'
          << "seed = " << seed_or_default() << '\n'
          << "tau_points = " << tau_points << '\n'
          << "tau_max = " << format_number(tau_max) << '\n'
          << "particles = " << particles << '\n'
          << "experiments = " << experiments << '\n';
        if (command == "signal") o << "t = " << format_number(t) << '\n';
        if (command == "sweep") {
            o << "trials =";
            for (auto n : trials) o << ' ' << n;
            o << '\n'
              << "seed_count = " << seed_count << '\n'
              << "cutoff = " << format_number(cutoff) << '\n';
        }
        return o.str();
    }
};

namespace detail {

inline std::string default_initial(int n_modes) {
    std::string s(static_cast<std::size_t>(n_modes), '0');
    for (int i = 0; i < std::min(2, n_modes); ++i) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

inline Experiment build_experiment(RunConfig& cfg) {
    FermionHamiltonian const fh = load_model_file(cfg.model_path);
    if (cfg.site >= fh.n_modes()) throw UsageError("--site is outside the model's modes");
    if (cfg.initial.empty()) cfg.initial = default_initial(fh.n_modes());
    StateVector initial = [&] {
        try {
            return prepare_basis_state(cfg.initial, fh.n_modes());
        } catch (std::invalid_argument const& e) {
            throw UsageError(std::string("--initial: ") + e.what());
        }
    }();
    return Experiment(jordan_wigner(fh), std::move(initial), cfg.experiment_config());
}

inline void write_file(std::string const& path, std::string const& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ModelError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw ModelError("failed writing '" + path + "'");
}

/// CSV to `path` plus a `<path>.config.txt` sidecar, or CSV to `out` if no path.
inline void emit(std::string const& path, std::string const& csv, std::string const& config, std::ostream& out) {
    if (path.empty()) {
        out << csv;
        return;
    }
    write_file(path, csv);
    write_file(path + ".config.txt", config);
}

inline std::string slope_path_for(std::string const& sweep_path) {
    std::string const ext = ".csv";
    if (sweep_path.size() > ext.size() && sweep_path.compare(sweep_path.size() - ext.size(), ext.size(), ext) == 0) {
        return sweep_path.substr(0, sweep_path.size() - ext.size()) + "_slopes.csv";
    }
    return sweep_path + ".slopes.csv";
}

}  // namespace detail

inline void cmd_trace(RunConfig cfg, std::ostream& out, std::ostream& err) {
    Experiment const exp = detail::build_experiment(cfg);
    std::vector<DensityTrace> traces;
    for (Method m : cfg.methods()) {
        std::int64_t const budget = m == Method::Bayesian ? cfg.experiments : cfg.shots;
        traces.push_back(exp.estimate_trace(m, budget, cfg.seed_or_default()));
        std::size_t flagged = 0;
        for (auto const& e : traces.back().estimates) flagged += e.flagged() ? 1 : 0;
        err << "trace " << to_string(m) << ": " << traces.back().size() << " points, " << flagged << " flagged\n";
    }
    std::ostringstream csv;
    write_trace_csv(csv, traces);
    detail::emit(cfg.output_path, csv.str(), cfg.describe("trace"), out);
}

inline void cmd_signal(RunConfig cfg, std::ostream& out, std::ostream& err) {
    Experiment const exp = detail::build_experiment(cfg);
    QubitHamiltonian const& h = exp.hamiltonian();
    StateVector const initial = prepare_basis_state(cfg.initial, h.n_qubits());
    StateVector const state = trotter_evolve(initial, h, TrotterPlan::in_order(h, cfg.t, cfg.trotter_steps));
    auto const taus = exp.tau_grid();
    auto const values = exp.sample_signal(state, cfg.shots, derive_seed(cfg.seed_or_default(), {0x5167}));
    std::ostringstream csv;
    csv << "tau,p0,p0_model,shots\n";
    for (std::size_t k = 0; k < taus.size(); ++k) {
        double const model = apply_readout_flip(hadamard_test_probability(state, cfg.site, taus[k]), exp.noise());
        csv << format_number(taus[k]) << ',' << format_number(values[k]) << ',' << format_number(model) << ','
            << cfg.shots << '\n';
    }
    err << "signal: t = " << format_number(cfg.t) << ", n = " << format_number(density_expectation(state, cfg.site))
        << ", " << taus.size() << " tau points\n";
    detail::emit(cfg.output_path, csv.str(), cfg.describe("signal"), out);
}

inline void cmd_sweep(RunConfig cfg, std::ostream& err) {
    if (cfg.output_path.empty()) throw UsageError("sweep requires --out");
    if (cfg.trials.empty()) throw UsageError("--trials must not be empty");
    Experiment const exp = detail::build_experiment(cfg);
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < cfg.seed_count; ++s) seeds.push_back(derive_seed(cfg.seed_or_default(), {0x5eed, std::uint64_t(s)}));
    auto const results = sweep_trials(exp, cfg.trials, seeds, kAllMethods, SweepOptions{cfg.cutoff, cfg.threads});
    std::ostringstream sweep_csv, slope_csv;
    write_sweep_csv(sweep_csv, results);
    write_slope_csv(slope_csv, results);
    std::string const slope_path = cfg.slope_path.empty() ? detail::slope_path_for(cfg.output_path) : cfg.slope_path;
    std::string const config = cfg.describe("sweep");
    detail::emit(cfg.output_path, sweep_csv.str(), config, err);
    detail::emit(slope_path, slope_csv.str(), config, err);
    for (auto const& r : results) {
        err << "sweep " << to_string(r.method) << ": slope " << format_number(r.fitted_slope) << " over "
            << r.points_used << " trial counts\n";
    }
}

/// Parses `args` (args[0] is the program name) and runs one subcommand.
inline int run(std::vector<std::string> const& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"Density extraction benchmarks on a Trotterized fermionic model", "tddens"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model_path, "Integral file")->required();
        sub->add_option("--site", cfg.site, "Mode whose density is measured");
        sub->add_option("--initial", cfg.initial, "Initial occupations, mode 0 first (default 11 then 0s)");
        sub->add_option("--t-max", cfg.t_max, "Last time point (a.u.)");
        sub->add_option("--t-points", cfg.t_points, "Number of time points on [0, t-max]");
        sub->add_option("--trotter-steps", cfg.trotter_steps, "First-order Trotter steps");
        sub->add_option("--shots", cfg.shots, "Shots per point (per tau point for harminv)");
        sub->add_option("--epsilon", cfg.epsilon, "Readout flip probability");
        sub->add_flag("--unbias", cfg.unbias, "Invert the readout channel in the direct-Z estimator");
        sub->add_option("--tau-points", cfg.tau_points, "Tau samples for harmonic inversion");
        sub->add_option("--tau-max", cfg.tau_max, "Largest tau for harmonic inversion");
        sub->add_option("--particles", cfg.particles, "SMC particles");
        sub->add_option("--experiments", cfg.experiments, "SMC experiments per time point");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--out", cfg.output_path, "Output CSV path (stdout if omitted)");
        sub->add_flag("--ci", cfg.ci, "Require an explicit --seed");
    };

    auto* trace = app.add_subcommand("trace", "Density trace over time for one or all methods");
    add_common(trace);
    trace->add_option("--method", cfg.method, "direct|harminv|bayes|all");

    auto* signal = app.add_subcommand("signal", "Raw Hadamard-test signal on the tau grid at one time");
    add_common(signal);
    signal->add_option("--t", cfg.t, "Evolution time");

    auto* sweep = app.add_subcommand("sweep", "Loss versus trials for all methods, with log-log slopes");
    add_common(sweep);
    sweep->add_option("--trials", cfg.trials, "Increasing per-point trial counts")->delimiter(',');
    sweep->add_option("--seed-count", cfg.seed_count, "Seeds averaged per trial count");
    sweep->add_option("--slope-out", cfg.slope_path, "Slope CSV path (default derived from --out)");
    sweep->add_option("--cutoff", cfg.cutoff, "Outlier cutoff in sigmas");
    sweep->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    std::vector<char const*> argv;
    for (auto const& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return kSuccess;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        cfg.validate();
        if (trace->parsed()) {
            cmd_trace(cfg, out, err);
        } else if (signal->parsed()) {
            cmd_signal(cfg, out, err);
        } else {
            cmd_sweep(cfg, err);
        }
    } catch (UsageError const& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (ModelError const& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (NumericalError const& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kSuccess;
}

}  // namespace tddens::cli
