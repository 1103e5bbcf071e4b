// Copyright 2026 The qftgi Authors
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

// Seeded Monte-Carlo measurement pipeline. Every random draw is a pure
// function of (master seed, shot index, stream), so tallies do not depend on
// how shots are spread over threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "qftgi/errors.hpp"
#include "qftgi/estimator.hpp"
#include "qftgi/numtheory.hpp"
#include "qftgi/optics.hpp"
#include "qftgi/probability.hpp"
#include "qftgi/states.hpp"

namespace qftgi {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) addressed by (seed, index, stream).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    const std::uint64_t z = mix64(seed ^ mix64(index * 8 + stream));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Q-value counts of a shot sequence. With PPNR degradation on, only
/// detected events are counted and `corrected` holds the per-Q sums of the
/// bunching correction weights.
struct ShotTally {
    std::vector<std::uint64_t> q_counts;
    std::uint64_t total_shots = 0;
    std::uint64_t seed = 0;
    std::uint64_t discarded = 0;
    std::vector<double> corrected;

    ShotTally& merge(const ShotTally& other) {
        if (q_counts.size() < other.q_counts.size()) q_counts.resize(other.q_counts.size(), 0);
        for (std::size_t k = 0; k < other.q_counts.size(); ++k) q_counts[k] += other.q_counts[k];
        if (corrected.size() < other.corrected.size()) corrected.resize(other.corrected.size(), 0.0);
        for (std::size_t k = 0; k < other.corrected.size(); ++k) corrected[k] += other.corrected[k];
        total_shots += other.total_shots;
        discarded += other.discarded;
        return *this;
    }

    /// Empirical Q-marginals (bunching-corrected when available).
    QMarginalDistribution frequencies() const {
        QMarginalDistribution q{std::vector<double>(q_counts.size(), 0.0)};
        if (!corrected.empty()) {
            double sum = 0.0;
            for (double w : corrected) sum += w;
            if (sum > 0.0)
                for (std::size_t k = 0; k < corrected.size(); ++k) q.probabilities[k] = corrected[k] / sum;
            return q;
        }
        if (total_shots == 0) return q;
        for (std::size_t k = 0; k < q_counts.size(); ++k)
            q.probabilities[k] = static_cast<double>(q_counts[k]) / static_cast<double>(total_shots);
        return q;
    }

    friend bool operator==(const ShotTally&, const ShotTally&) = default;
};

struct SamplerOptions {
    unsigned threads = 1;
    /// Simulate pseudo-number-resolving detection (each mode fanned out over
    /// m threshold detectors): k bunched photons in one mode are resolved with
    /// probability 1 / ppnr_correction(m, k); unresolved events are dropped
    /// and resolved ones re-weighted by the correction factor.
    bool ppnr = false;
};

namespace detail {

struct ComponentSampler {
    std::vector<double> cdf;
    std::vector<int> q;
    std::vector<double> detect;
    std::vector<double> weight;

    std::size_t draw(double u) const {
        const double x = u * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    }
};

inline ComponentSampler make_component_sampler(const UnitaryMatrix& u, const PartitionState& state,
                                               unsigned threads) {
    const auto dist = output_distribution(u, state, threads);
    ComponentSampler cs;
    const int m = u.modes();
    double acc = 0.0;
    for (const auto& [s, p] : dist.entries) {
        acc += std::max(0.0, p);
        cs.cdf.push_back(acc);
        cs.q.push_back(q_value(s));
        double detect = 1.0, weight = 1.0;
        for (int v : s.occupations())
            if (v >= 2) {
                const double c = ppnr_correction(m, v);
                detect /= c;
                weight *= c;
            }
        cs.detect.push_back(detect);
        cs.weight.push_back(weight);
    }
    if (!(acc > 0.0)) throw NumericalError("sampler: output distribution has no mass");
    return cs;
}

}  // namespace detail

/// Per shot: pick a mixture component by weight (stream 0), draw an output
/// from its exact distribution by inverse CDF (stream 1), tally Q. Stream 2
/// decides PPNR detection when enabled.
inline ShotTally sample_q_tally(const PartitionMixture& mixture, const UnitaryMatrix& u,
                                std::uint64_t shots, std::uint64_t seed,
                                const SamplerOptions& options = {}) {
    if (shots == 0) throw InvalidArgument("sample_q_tally: shots must be positive");
    if (mixture.occupations().modes() != u.modes())
        throw InvalidArgument("sample_q_tally: mixture and unitary disagree on mode count");

    std::vector<detail::ComponentSampler> samplers;
    std::map<std::vector<int>, std::size_t> by_registers;
    std::vector<std::size_t> sampler_of;
    std::vector<double> weight_cdf;
    double acc = 0.0;
    for (const auto& c : mixture.components()) {
        auto [it, fresh] = by_registers.emplace(c.state.registers(), samplers.size());
        if (fresh) samplers.push_back(detail::make_component_sampler(u, c.state, options.threads));
        sampler_of.push_back(it->second);
        acc += c.weight;
        weight_cdf.push_back(acc);
    }

    const std::size_t m = static_cast<std::size_t>(u.modes());
    auto run = [&](std::uint64_t begin, std::uint64_t end) {
        ShotTally t;
        t.q_counts.assign(m, 0);
        if (options.ppnr) t.corrected.assign(m, 0.0);
        for (std::uint64_t i = begin; i < end; ++i) {
            const double x = counter_uniform(seed, i, 0) * weight_cdf.back();
            auto cit = std::upper_bound(weight_cdf.begin(), weight_cdf.end(), x);
            const std::size_t comp =
                std::min<std::size_t>(static_cast<std::size_t>(cit - weight_cdf.begin()),
                                      weight_cdf.size() - 1);
            const auto& cs = samplers[sampler_of[comp]];
            const std::size_t out = cs.draw(counter_uniform(seed, i, 1));
            const auto q = static_cast<std::size_t>(cs.q[out]);
            if (options.ppnr) {
                if (counter_uniform(seed, i, 2) >= cs.detect[out]) {
                    ++t.discarded;
                    continue;
                }
                t.corrected[q] += cs.weight[out];
            }
            ++t.q_counts[q];
            ++t.total_shots;
        }
        return t;
    };

    const unsigned threads =
        static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.threads, shots)));
    ShotTally total;
    if (threads == 1) {
        total = run(0, shots);
    } else {
        std::vector<ShotTally> parts(threads);
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (shots + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min(shots, t * chunk), end = std::min(shots, begin + chunk);
            pool.emplace_back([&, t, begin, end] {
                try {
                    parts[t] = run(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        total = parts[0];
        for (unsigned t = 1; t < threads; ++t) total.merge(parts[t]);
    }
    total.seed = seed;
    return total;
}

struct ExperimentResult {
    GIEstimate estimate;
    std::optional<CoefficientVector> coefficients;  // non-prime QFT runs
    std::optional<ShotTally> tally;                 // QFT runs
    std::vector<PhaseSample> phase_samples;         // CI runs
    QMarginalDistribution frequencies;              // QFT runs
    std::optional<double> true_c1;
    std::uint64_t wall_time_ms = 0;
};

namespace detail {

inline std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
}

}  // namespace detail

/// Full QFT protocol on a synthetic mixture: sample, tally, estimate.
/// Prime n uses the closed form on P(Q != 0); other n the pseudo-inverse.
inline ExperimentResult run_qft_experiment(const PartitionMixture& mixture, std::uint64_t shots,
                                           std::uint64_t seed, const SamplerOptions& options = {}) {
    const auto start = std::chrono::steady_clock::now();
    const auto& occ = mixture.occupations();
    const int n = mixture.photons();
    if (n != occ.modes() || !occ.one_photon_per_mode())
        throw InvalidArgument("run_qft_experiment: requires n = m with one photon per mode");
    if (n < 2) throw InvalidArgument("run_qft_experiment: n must be >= 2");

    ExperimentResult res;
    const auto u = qft_matrix(n);
    res.tally = sample_q_tally(mixture, u, shots, seed, options);
    res.frequencies = res.tally->frequencies();
    res.true_c1 = mixture.indistinguishable_weight();
    const std::uint64_t used = res.tally->total_shots;
    if (used == 0) throw NumericalError("run_qft_experiment: no detected events");
    if (is_prime(static_cast<std::uint64_t>(n))) {
        res.estimate = estimate_c1_prime(std::clamp(res.frequencies.nonzero(), 0.0, 1.0), n, used);
    } else {
        auto ce = estimate_c_vector(res.frequencies, n, used);
        res.estimate = ce.gi;
        res.coefficients = std::move(ce.coefficients);
    }
    res.wall_time_ms = detail::elapsed_ms(start);
    return res;
}

/// `count` phases k 2 pi / count, k = 0..count-1.
inline std::vector<double> uniform_phases(int count) {
    if (count < 1) throw InvalidArgument("uniform_phases: count must be >= 1");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(2.0 * std::numbers::pi * k / count);
    return out;
}

/// Baseline fringe scan: binomial hits per phase from the post-selected
/// fringe probability, then a linear fringe fit.
inline ExperimentResult run_ci_experiment(int n, double c1, const std::vector<double>& phases,
                                          std::uint64_t shots_per_phase, std::uint64_t seed,
                                          CiScale scale = CiScale::single_output) {
    const auto start = std::chrono::steady_clock::now();
    if (phases.size() < 3) throw InvalidArgument("run_ci_experiment: need at least 3 phases");
    if (shots_per_phase == 0) throw InvalidArgument("run_ci_experiment: shots must be positive");
    ExperimentResult res;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double p = ci_fringe_probability(n, c1, phases[i], scale);
        std::mt19937_64 rng(mix64(seed ^ mix64(0xC1000000ULL + i)));
        std::binomial_distribution<std::uint64_t> draw(shots_per_phase, p);
        res.phase_samples.push_back({phases[i], static_cast<double>(draw(rng)), shots_per_phase});
    }
    res.estimate = fit_ci_fringe(res.phase_samples);
    res.true_c1 = c1;
    res.wall_time_ms = detail::elapsed_ms(start);
    return res;
}

struct ComparisonRow {
    int n;
    bool prime;
    std::uint64_t qft_shots;
    double ci_shots;
    double ratio;  // ci / qft
};

inline std::vector<ComparisonRow> compare_protocols(const std::vector<int>& n_values, double epsilon,
                                                    double delta,
                                                    CiScale scale = CiScale::combined_outputs) {
    if (n_values.empty()) throw InvalidArgument("compare_protocols: empty range");
    std::vector<ComparisonRow> rows;
    for (int n : n_values) {
        if (n < 2) throw InvalidArgument("compare_protocols: n must be >= 2");
        ComparisonRow r{n, is_prime(static_cast<std::uint64_t>(n)),
                        shots_required_qft(epsilon, delta, n),
                        shots_required_ci(epsilon, delta, n, scale), 0.0};
        r.ratio = r.ci_shots / static_cast<double>(r.qft_shots);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace qftgi
