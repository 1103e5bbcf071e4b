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

// Photon-state data model. Modes are 1-based wherever a mode index is exposed
// (mode assignments, Q-values); occupation vectors are plain 0-based arrays.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qftgi/errors.hpp"
#include "qftgi/numtheory.hpp"

namespace qftgi {

/// Occupation-number vector: photons per mode.
class FockState {
public:
    FockState() = default;

    explicit FockState(std::vector<int> occupations) : occ_(std::move(occupations)) {
        if (occ_.empty()) throw InvalidArgument("FockState: need at least one mode");
        for (int v : occ_)
            if (v < 0) throw InvalidArgument("FockState: negative occupation");
    }

    FockState(std::initializer_list<int> occupations)
        : FockState(std::vector<int>(occupations)) {}

    const std::vector<int>& occupations() const { return occ_; }
    int operator[](std::size_t mode) const { return occ_[mode]; }
    int modes() const { return static_cast<int>(occ_.size()); }
    int photons() const { return std::accumulate(occ_.begin(), occ_.end(), 0); }

    bool one_photon_per_mode() const {
        return std::all_of(occ_.begin(), occ_.end(), [](int v) { return v == 1; });
    }
    bool is_coincidence() const {
        return std::all_of(occ_.begin(), occ_.end(), [](int v) { return v <= 1; });
    }

    /// s'_j = s_{j+k mod m}: every photon moves k modes down (cyclically).
    FockState shifted(int k) const {
        const int m = modes();
        std::vector<int> out(occ_.size());
        for (int j = 0; j < m; ++j) out[j] = occ_[((j + k) % m + m) % m];
        return FockState(std::move(out));
    }

    friend auto operator<=>(const FockState&, const FockState&) = default;

private:
    std::vector<int> occ_;
};

/// Sorted 1-based mode index per photon.
struct ModeAssignment {
    std::vector<int> modes;
    std::size_t size() const { return modes.size(); }
    int operator[](std::size_t i) const { return modes[i]; }
    friend bool operator==(const ModeAssignment&, const ModeAssignment&) = default;
};

inline ModeAssignment mode_assignment(const FockState& state) {
    ModeAssignment d;
    d.modes.reserve(static_cast<std::size_t>(state.photons()));
    for (int j = 0; j < state.modes(); ++j)
        for (int c = 0; c < state[j]; ++c) d.modes.push_back(j + 1);
    return d;
}

/// (sum of 1-based photon modes) mod m.
inline int q_value(const FockState& state) {
    const auto d = mode_assignment(state);
    const long long total = std::accumulate(d.modes.begin(), d.modes.end(), 0LL);
    return static_cast<int>(total % state.modes());
}

/// Relabels register labels in first-occurrence order (restricted growth form).
inline std::vector<int> canonical_registers(const std::vector<int>& labels) {
    std::vector<int> out(labels.size());
    std::vector<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1) throw InvalidArgument("register labels must be >= 1");
        auto it = std::find_if(seen.begin(), seen.end(),
                               [&](const auto& p) { return p.first == labels[i]; });
        if (it == seen.end()) {
            seen.emplace_back(labels[i], static_cast<int>(seen.size()) + 1);
            out[i] = static_cast<int>(seen.size());
        } else {
            out[i] = it->second;
        }
    }
    return out;
}

/// Fock state whose photons (in mode-assignment order) carry register labels.
/// Equal labels: mutually indistinguishable. Different labels: orthogonal.
class PartitionState {
public:
    PartitionState() = default;

    PartitionState(FockState occupations, std::vector<int> registers)
        : occ_(std::move(occupations)), regs_(canonical_registers(registers)) {
        if (static_cast<int>(regs_.size()) != occ_.photons())
            throw InvalidArgument("PartitionState: register count (" +
                                  std::to_string(regs_.size()) + ") != photon number (" +
                                  std::to_string(occ_.photons()) + ")");
    }

    /// One photon per mode, m = n = registers.size().
    static PartitionState one_per_mode(std::vector<int> registers) {
        if (registers.empty()) throw InvalidArgument("PartitionState: no photons");
        FockState occ(std::vector<int>(registers.size(), 1));
        return PartitionState(std::move(occ), std::move(registers));
    }

    const FockState& occupations() const { return occ_; }
    const std::vector<int>& registers() const { return regs_; }
    int photons() const { return static_cast<int>(regs_.size()); }
    int modes() const { return occ_.modes(); }
    int register_count() const {
        return regs_.empty() ? 0 : *std::max_element(regs_.begin(), regs_.end());
    }
    bool fully_indistinguishable() const { return register_count() <= 1; }

    friend bool operator==(const PartitionState&, const PartitionState&) = default;

private:
    FockState occ_;
    std::vector<int> regs_;
};

/// Pairwise overlap matrix (0/1) induced by register membership.
class DistinguishabilityMatrix {
public:
    explicit DistinguishabilityMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n, 0) {}

    int size() const { return n_; }
    int operator()(int k, int l) const { return e_[static_cast<std::size_t>(k) * n_ + l]; }
    void set(int k, int l, int v) { e_[static_cast<std::size_t>(k) * n_ + l] = static_cast<std::uint8_t>(v); }

    static DistinguishabilityMatrix identity(int n) {
        DistinguishabilityMatrix s(n);
        for (int k = 0; k < n; ++k) s.set(k, k, 1);
        return s;
    }
    static DistinguishabilityMatrix ones(int n) {
        DistinguishabilityMatrix s(n);
        std::fill(s.e_.begin(), s.e_.end(), 1);
        return s;
    }

    friend bool operator==(const DistinguishabilityMatrix&, const DistinguishabilityMatrix&) = default;

private:
    int n_;
    std::vector<std::uint8_t> e_;
};

inline DistinguishabilityMatrix distinguishability_matrix(const PartitionState& state) {
    const int n = state.photons();
    DistinguishabilityMatrix s(n);
    const auto& r = state.registers();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s.set(k, l, r[k] == r[l] ? 1 : 0);
    return s;
}

namespace detail {

inline void require_one_per_mode(const PartitionState& state, const char* what) {
    if (state.photons() != state.modes() || !state.occupations().one_photon_per_mode())
        throw InvalidArgument(std::string(what) +
                              ": requires n = m with exactly one photon per mode");
}

}  // namespace detail

/// Smallest t | n with registers[i] == registers[(i + t) mod n] for all i.
/// Non-periodic states return n.
inline int periodicity(const PartitionState& state) {
    detail::require_one_per_mode(state, "periodicity");
    const int n = state.photons();
    const auto& r = state.registers();
    for (auto t64 : divisors(static_cast<std::uint64_t>(n))) {
        const int t = static_cast<int>(t64);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = r[i] == r[(i + t) % n];
        if (ok) return t;
    }
    return n;
}

/// Registers (1, 2, ..., t) repeated n / t times; period exactly t.
inline PartitionState periodic_partition_state(int n, int t) {
    if (n < 1 || t < 1 || n % t != 0)
        throw InvalidArgument("periodic_partition_state: t must divide n");
    std::vector<int> regs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) regs[i] = i % t + 1;
    return PartitionState::one_per_mode(std::move(regs));
}

/// Repeats a register pattern until it covers n photons.
inline PartitionState tile_pattern(int n, const std::vector<int>& pattern) {
    if (pattern.empty() || n % static_cast<int>(pattern.size()) != 0)
        throw InvalidArgument("tile_pattern: pattern length must divide n");
    std::vector<int> regs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) regs[i] = pattern[i % pattern.size()];
    return PartitionState::one_per_mode(std::move(regs));
}

/// n - 1 mutually indistinguishable photons plus singletons: the first
/// `indistinguishable` photons share register 1, the rest are singletons.
inline PartitionState obb_state(int n, int indistinguishable, int offset = 0) {
    if (indistinguishable < 1 || indistinguishable > n)
        throw InvalidArgument("obb_state: bad register size");
    std::vector<int> regs(static_cast<std::size_t>(n));
    int next = 2;
    for (int i = 0; i < n; ++i) regs[i] = i < indistinguishable ? 1 : next++;
    std::rotate(regs.begin(), regs.begin() + (offset % n), regs.end());
    return PartitionState::one_per_mode(std::move(regs));
}

inline constexpr int kMaxPartitionEnumeration = 12;

/// Visits every restricted growth string of length n (1-based labels).
template <typename Visitor>
void for_each_set_partition(int n, Visitor&& visit) {
    if (n < 1) throw InvalidArgument("for_each_set_partition: n must be >= 1");
    std::vector<int> a(static_cast<std::size_t>(n), 1);
    std::vector<int> prefix_max(static_cast<std::size_t>(n), 1);
    while (true) {
        visit(static_cast<const std::vector<int>&>(a));
        int i = n - 1;
        while (i > 0 && a[i] > prefix_max[i - 1]) --i;
        if (i == 0) return;
        ++a[i];
        prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
        for (int j = i + 1; j < n; ++j) {
            a[j] = 1;
            prefix_max[j] = prefix_max[i];
        }
    }
}

inline std::vector<PartitionState> enumerate_partition_states(int n) {
    if (n < 1) throw InvalidArgument("enumerate_partition_states: n must be >= 1");
    if (n > kMaxPartitionEnumeration)
        throw GuardError("enumerate_partition_states: n = " + std::to_string(n) +
                         " exceeds limit " + std::to_string(kMaxPartitionEnumeration));
    std::vector<PartitionState> out;
    for_each_set_partition(n, [&](const std::vector<int>& regs) {
        out.push_back(PartitionState::one_per_mode(regs));
    });
    return out;
}

inline constexpr double kMaxOutputEnumeration = 1e7;

/// C(n + m - 1, m - 1) in floating point (saturates rather than overflows).
inline double output_count(int n, int m) {
    double c = 1.0;
    for (int k = 1; k <= m - 1; ++k) c = c * (n + k) / k;
    return c;
}

/// All occupation vectors of n photons in m modes, lexicographically
/// descending: (n,0,...,0) first, (0,...,0,n) last.
inline std::vector<FockState> enumerate_outputs(int n, int m) {
    if (n < 0) throw InvalidArgument("enumerate_outputs: n must be >= 0");
    if (m < 1) throw InvalidArgument("enumerate_outputs: m must be >= 1");
    if (output_count(n, m) > kMaxOutputEnumeration)
        throw GuardError("enumerate_outputs: C(n+m-1, m-1) exceeds 1e7 for n = " +
                         std::to_string(n) + ", m = " + std::to_string(m));
    std::vector<FockState> out;
    out.reserve(static_cast<std::size_t>(output_count(n, m) + 0.5));
    std::vector<int> s(static_cast<std::size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == m - 1) {
            s[mode] = left;
            out.emplace_back(s);
            return;
        }
        for (int c = left; c >= 0; --c) {
            s[mode] = c;
            rec(mode + 1, left - c);
        }
    };
    rec(0, n);
    return out;
}

/// Weighted ensemble of partition states sharing one occupation vector.
class PartitionMixture {
public:
    struct Component {
        double weight;
        PartitionState state;
    };

    PartitionMixture() = default;

    explicit PartitionMixture(std::vector<Component> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw InvalidArgument("PartitionMixture: no components");
        double total = 0.0;
        for (const auto& c : components_) {
            if (!(c.weight >= 0.0)) throw InvalidArgument("PartitionMixture: negative weight");
            if (!(c.state.occupations() == components_.front().state.occupations()))
                throw InvalidArgument("PartitionMixture: components have different occupations");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidArgument("PartitionMixture: weights sum to " + std::to_string(total) +
                                  ", expected 1");
    }

    const std::vector<Component>& components() const { return components_; }
    const FockState& occupations() const { return components_.front().state.occupations(); }
    int photons() const { return components_.front().state.photons(); }

    /// Total weight on fully indistinguishable components.
    double indistinguishable_weight() const {
        double c1 = 0.0;
        for (const auto& c : components_)
            if (c.state.fully_indistinguishable()) c1 += c.weight;
        return c1;
    }

private:
    std::vector<Component> components_;
};

}  // namespace qftgi
