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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qftgi/errors.hpp"
#include "qftgi/numtheory.hpp"
#include "qftgi/optics.hpp"
#include "qftgi/states.hpp"

namespace qftgi {

/// Probabilities over every output Fock state, in enumerate_outputs order.
struct OutputDistribution {
    std::vector<std::pair<FockState, double>> entries;

    std::size_t size() const { return entries.size(); }

    double total() const {
        double t = 0.0;
        for (const auto& [s, p] : entries) t += p;
        return t;
    }

    /// Probability of `state`; zero when the state is not in the support.
    double at(const FockState& state) const {
        // entries are sorted descending
        auto it = std::lower_bound(entries.begin(), entries.end(), state,
                                   [](const auto& e, const FockState& s) { return e.first > s; });
        return (it != entries.end() && it->first == state) ? it->second : 0.0;
    }
};

/// P(Q = k) for k = 0, ..., m - 1.
struct QMarginalDistribution {
    std::vector<double> probabilities;

    std::size_t size() const { return probabilities.size(); }
    double operator[](std::size_t k) const { return probabilities[k]; }
    double nonzero() const {
        return std::accumulate(probabilities.begin() + (probabilities.empty() ? 0 : 1),
                               probabilities.end(), 0.0);
    }
};

namespace detail {

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline double occupation_factorials(const std::vector<int>& occ) {
    double f = 1.0;
    for (int v : occ) f *= factorial(v);
    return f;
}

inline void check_transition(const UnitaryMatrix& u, const FockState& input, const FockState& output) {
    if (input.modes() != u.modes() || output.modes() != u.modes())
        throw InvalidArgument("transition: mode count mismatch (U has " + std::to_string(u.modes()) +
                              " modes, input " + std::to_string(input.modes()) + ", output " +
                              std::to_string(output.modes()) + ")");
    if (input.photons() != output.photons())
        throw InvalidArgument("transition: photon number mismatch (" +
                              std::to_string(input.photons()) + " in, " +
                              std::to_string(output.photons()) + " out)");
}

}  // namespace detail

/// |Per(M)|^2 / prod_i r_i! s_i!
inline double p_indistinguishable(const UnitaryMatrix& u, const FockState& input,
                                  const FockState& output) {
    detail::check_transition(u, input, output);
    const auto sm = effective_scattering_matrix(u, input, output);
    return std::norm(permanent(sm.entries)) /
           (detail::occupation_factorials(input.occupations()) *
            detail::occupation_factorials(output.occupations()));
}

/// Per(|M|^2) / prod_i s_i!. Distinguishable photons are labelled, so
/// multiply occupied input modes carry no r_i! factor.
inline double p_distinguishable(const UnitaryMatrix& u, const FockState& input,
                                const FockState& output) {
    detail::check_transition(u, input, output);
    const auto sm = effective_scattering_matrix(u, input, output);
    const Eigen::MatrixXd w = sm.entries.cwiseAbs2();
    return permanent(w) / detail::occupation_factorials(output.occupations());
}

inline constexpr int kMaxCoincidencePhotons = 7;

/// Double sum over permutations sigma, rho of
///   prod_j M(j, sigma(j)) conj(M(j, rho(j))) S(rho(j), sigma(j))
/// with rows of M indexing output photons and columns input photons.
inline double p_general_coincidence(const UnitaryMatrix& u, const FockState& input,
                                    const FockState& output, const DistinguishabilityMatrix& s) {
    detail::check_transition(u, input, output);
    if (!input.is_coincidence() || !output.is_coincidence())
        throw InvalidArgument("p_general_coincidence: at most one photon per mode required");
    const int n = input.photons();
    if (s.size() != n) throw InvalidArgument("p_general_coincidence: S has wrong dimension");
    if (n > kMaxCoincidencePhotons)
        throw GuardError("p_general_coincidence: n = " + std::to_string(n) + " exceeds limit " +
                         std::to_string(kMaxCoincidencePhotons));
    const auto m = effective_scattering_matrix(u, input, output).entries;

    std::vector<int> sigma(static_cast<std::size_t>(n)), rho(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total(0.0);
    do {
        Complex amp(1.0);
        for (int j = 0; j < n; ++j) amp *= m(j, sigma[j]);
        std::iota(rho.begin(), rho.end(), 0);
        do {
            bool overlap = true;
            for (int j = 0; j < n && overlap; ++j) overlap = s(rho[j], sigma[j]) != 0;
            if (!overlap) continue;
            Complex conj_amp(1.0);
            for (int j = 0; j < n; ++j) conj_amp *= std::conj(m(j, rho[j]));
            total += amp * conj_amp;
        } while (std::next_permutation(rho.begin(), rho.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    if (std::abs(total.imag()) > 1e-8)
        throw NumericalError("p_general_coincidence: imaginary residue " +
                             std::to_string(total.imag()));
    return total.real();
}

inline constexpr std::uint64_t kMaxDecompositions = 100'000'000;

/// Evaluates transition probabilities for one partition input under one
/// unitary, caching per-register sub-output contributions across outputs.
///
/// Registers holding two or more photons interfere internally; all singleton
/// registers are pooled into a single distinguishable block, whose
/// contribution for a joint sub-output is Per(|M|^2) / prod s_i! (the sum
/// over all ways of splitting that sub-output among the singletons).
class PartitionEvaluator {
public:
    PartitionEvaluator(const UnitaryMatrix& u, const PartitionState& input)
        : u_(&u), input_(input), m_(input.modes()) {
        if (input.modes() != u.modes())
            throw InvalidArgument("p_partition: mode count mismatch (U has " +
                                  std::to_string(u.modes()) + " modes, input " +
                                  std::to_string(input.modes()) + ")");
        const auto d = mode_assignment(input.occupations());
        const auto& regs = input.registers();
        const int k = input.register_count();
        std::vector<int> sizes(static_cast<std::size_t>(k) + 1, 0);
        for (int r : regs) ++sizes[r];

        std::vector<int> block_of(static_cast<std::size_t>(k) + 1, -1);
        int singleton_block = -1;
        for (int r = 1; r <= k; ++r) {
            if (sizes[r] >= 2) {
                block_of[r] = static_cast<int>(blocks_.size());
                blocks_.push_back(Block{true, std::vector<int>(m_, 0), 0, {}});
            } else {
                if (singleton_block < 0) {
                    singleton_block = static_cast<int>(blocks_.size());
                    blocks_.push_back(Block{false, std::vector<int>(m_, 0), 0, {}});
                }
                block_of[r] = singleton_block;
            }
        }
        for (std::size_t p = 0; p < regs.size(); ++p) {
            auto& b = blocks_[block_of[regs[p]]];
            ++b.input[d[p] - 1];
            ++b.photons;
        }
        for (auto& b : blocks_) b.input_norm = detail::occupation_factorials(b.input);
    }

    double operator()(const FockState& output) {
        if (output.modes() != m_)
            throw InvalidArgument("p_partition: output has " + std::to_string(output.modes()) +
                                  " modes, expected " + std::to_string(m_));
        if (output.photons() != input_.photons())
            throw InvalidArgument("p_partition: photon number mismatch");
        if (blocks_.size() == 1) return block_value(0, output.occupations());

        target_ = &output.occupations();
        remaining_.resize(blocks_.size());
        for (std::size_t b = 0; b < blocks_.size(); ++b) remaining_[b] = blocks_[b].photons;
        sub_.assign(blocks_.size(), std::vector<int>(m_, 0));
        leaves_ = 0;
        return split_mode(0, 0, (*target_)[0]);
    }

private:
    struct Block {
        bool indistinguishable;
        std::vector<int> input;
        int photons;
        double input_norm = 1.0;
        std::map<std::vector<int>, double> cache{};
    };

    double block_value(std::size_t b, const std::vector<int>& sub_output) {
        auto& blk = blocks_[b];
        if (auto it = blk.cache.find(sub_output); it != blk.cache.end()) return it->second;
        const FockState in(blk.input), out(sub_output);
        const auto sm = effective_scattering_matrix(*u_, in, out);
        const double out_norm = detail::occupation_factorials(sub_output);
        double v;
        if (blk.indistinguishable) {
            v = std::norm(permanent(sm.entries)) / (blk.input_norm * out_norm);
        } else {
            const Eigen::MatrixXd w = sm.entries.cwiseAbs2();
            v = permanent(w) / out_norm;
        }
        blk.cache.emplace(sub_output, v);
        return v;
    }

    // Distribute the photons of `mode` over blocks b, b+1, ... .
    double split_mode(int mode, std::size_t b, int left) {
        if (mode == m_) {
            if (++leaves_ > kMaxDecompositions)
                throw GuardError("p_partition: register decomposition count exceeds limit");
            double prod = 1.0;
            for (std::size_t k = 0; k < blocks_.size() && prod != 0.0; ++k)
                prod *= block_value(k, sub_[k]);
            return prod;
        }
        const auto next = [&](int c) {
            sub_[b][mode] = c;
            remaining_[b] -= c;
            double v;
            if (b + 1 == blocks_.size()) {
                v = (left - c == 0) ? advance_mode(mode) : 0.0;
            } else {
                v = split_mode(mode, b + 1, left - c);
            }
            remaining_[b] += c;
            sub_[b][mode] = 0;
            return v;
        };
        if (b + 1 == blocks_.size()) {
            return left <= remaining_[b] ? next(left) : 0.0;
        }
        double total = 0.0;
        for (int c = std::min(left, remaining_[b]); c >= 0; --c) total += next(c);
        return total;
    }

    double advance_mode(int mode) {
        if (mode + 1 == m_) {
            for (int r : remaining_)
                if (r != 0) return 0.0;
            return split_mode(m_, 0, 0);
        }
        return split_mode(mode + 1, 0, (*target_)[mode + 1]);
    }

    const UnitaryMatrix* u_;
    PartitionState input_;
    int m_;
    std::vector<Block> blocks_;
    const std::vector<int>* target_ = nullptr;
    std::vector<int> remaining_;
    std::vector<std::vector<int>> sub_;
    std::uint64_t leaves_ = 0;
};

/// Sum over register-wise output decompositions of prod_j N_j |Per(M_j)|^2.
inline double p_partition(const UnitaryMatrix& u, const PartitionState& input,
                          const FockState& output) {
    detail::check_transition(u, input.occupations(), output);
    PartitionEvaluator eval(u, input);
    return eval(output);
}

/// Distribution over all outputs. Outputs are split into contiguous chunks
/// evaluated on `threads` workers, each with its own evaluator.
inline OutputDistribution output_distribution(const UnitaryMatrix& u, const PartitionState& input,
                                              unsigned threads = 1) {
    if (input.modes() != u.modes())
        throw InvalidArgument("output_distribution: mode count mismatch");
    auto outputs = enumerate_outputs(input.photons(), input.modes());
    std::vector<double> probs(outputs.size(), 0.0);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(outputs.size())));

    auto work = [&](std::size_t begin, std::size_t end) {
        PartitionEvaluator eval(u, input);
        for (std::size_t i = begin; i < end; ++i) probs[i] = eval(outputs[i]);
    };
    if (threads == 1) {
        work(0, outputs.size());
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (outputs.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk, end = std::min(outputs.size(), begin + chunk);
            pool.emplace_back([&, t, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    OutputDistribution dist;
    dist.entries.reserve(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i)
        dist.entries.emplace_back(std::move(outputs[i]), probs[i]);
    return dist;
}

inline QMarginalDistribution q_marginals(const OutputDistribution& dist) {
    if (dist.entries.empty()) return {};
    QMarginalDistribution q{std::vector<double>(dist.entries.front().first.modes(), 0.0)};
    for (const auto& [s, p] : dist.entries) q.probabilities[q_value(s)] += p;
    return q;
}

inline QMarginalDistribution q_marginals_bruteforce(const UnitaryMatrix& u,
                                                    const PartitionState& input,
                                                    unsigned threads = 1) {
    return q_marginals(output_distribution(u, input, threads));
}

/// Closed form for one photon per mode through QFT_n:
///   P(Q = k) = (1/n) sum_j omega^{kj} prod_i S(i, i + j mod n).
inline QMarginalDistribution q_marginals_analytic(const PartitionState& input) {
    detail::require_one_per_mode(input, "q_marginals_analytic");
    const int n = input.photons();
    const auto& r = input.registers();
    std::vector<int> surviving;
    for (int j = 0; j < n; ++j) {
        bool fixed = true;
        for (int i = 0; i < n && fixed; ++i) fixed = r[i] == r[(i + j) % n];
        if (fixed) surviving.push_back(j);
    }
    QMarginalDistribution q{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (int k = 0; k < n; ++k) {
        Complex sum(0.0);
        for (int j : surviving) {
            const long long e = (static_cast<long long>(k) * j) % n;
            sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / n);
        }
        sum /= static_cast<double>(n);
        if (std::abs(sum.imag()) > 1e-10)
            throw NumericalError("q_marginals_analytic: imaginary residue " +
                                 std::to_string(sum.imag()) + " at k = " + std::to_string(k));
        q.probabilities[k] = sum.real();
    }
    return q;
}

/// 1/t on k = 0 mod n/t, zero elsewhere.
inline QMarginalDistribution q_marginals_periodic(int t, int n) {
    if (t < 1 || n < 1 || n % t != 0)
        throw InvalidArgument("q_marginals_periodic: t = " + std::to_string(t) +
                              " must divide n = " + std::to_string(n));
    QMarginalDistribution q{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (int k = 0; k < n; k += n / t) q.probabilities[k] = 1.0 / t;
    return q;
}

/// Smallest t | m with occupations invariant under a cyclic shift by t.
inline int fock_periodicity(const FockState& s) {
    const int m = s.modes();
    for (auto t64 : divisors(static_cast<std::uint64_t>(m))) {
        const int t = static_cast<int>(t64);
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) ok = s[i] == s[(i + t) % m];
        if (ok) return t;
    }
    return m;
}

struct UniformityReport {
    struct Row {
        int q;
        double probability;
        bool suppressed;
    };
    int period = 0;
    int photons_per_period = 0;
    bool coprime = false;  // gcd(photons_per_period, period) == 1
    std::vector<Row> rows;
    double max_suppressed = 0.0;
    double max_uniform_deviation = 0.0;
    bool uniform = false;  // only meaningful when coprime
    bool passed() const { return max_suppressed < 1e-12 && (!coprime || uniform); }
};

/// Brute-force check of the periodic suppression law and of the 1/t
/// uniformity of the surviving Q-values for a periodic, fully
/// indistinguishable Fock input under QFT_m.
inline UniformityReport verify_pztl_uniformity(int m, const FockState& input) {
    if (input.modes() != m) throw InvalidArgument("verify_pztl_uniformity: input must have m modes");
    if (input.photons() < 1) throw InvalidArgument("verify_pztl_uniformity: input has no photons");
    const int t = fock_periodicity(input);
    if (t == m && m > 1)
        throw InvalidArgument("verify_pztl_uniformity: input is not periodic (t = m)");

    UniformityReport rep;
    rep.period = t;
    rep.photons_per_period = input.photons() / (m / t);
    rep.coprime = std::gcd(rep.photons_per_period, t) == 1;

    const auto u = qft_matrix(m);
    const PartitionState state(input, std::vector<int>(static_cast<std::size_t>(input.photons()), 1));
    const auto q = q_marginals_bruteforce(u, state);
    const int stride = m / t;
    rep.uniform = true;
    for (int k = 0; k < m; ++k) {
        const bool suppressed = k % stride != 0;
        rep.rows.push_back({k, q[k], suppressed});
        if (suppressed) {
            rep.max_suppressed = std::max(rep.max_suppressed, q[k]);
        } else {
            const double dev = std::abs(q[k] - 1.0 / t);
            rep.max_uniform_deviation = std::max(rep.max_uniform_deviation, dev);
            if (dev > 1e-9) rep.uniform = false;
        }
    }
    return rep;
}

}  // namespace qftgi
