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

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qftgi/errors.hpp"

namespace qftgi {

/// All positive divisors of `n` in increasing order.
struct DivisorList {
    std::uint64_t n = 1;
    std::vector<std::uint64_t> divisors{1};

    std::size_t size() const { return divisors.size(); }
    std::uint64_t operator[](std::size_t i) const { return divisors[i]; }
    auto begin() const { return divisors.begin(); }
    auto end() const { return divisors.end(); }
};

namespace detail {

inline void require_positive(std::uint64_t n, const char* what) {
    if (n == 0) throw InvalidArgument(std::string(what) + ": argument must be >= 1");
}

}  // namespace detail

/// Trial division up to sqrt(n).
inline DivisorList divisors(std::uint64_t n) {
    detail::require_positive(n, "divisors");
    std::vector<std::uint64_t> low, high;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        low.push_back(d);
        if (d != n / d) high.push_back(n / d);
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return DivisorList{n, std::move(low)};
}

/// Prime factorization as (prime, exponent) pairs, primes increasing.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    detail::require_positive(n, "factorize");
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

/// Euler's totient.
inline std::uint64_t totient(std::uint64_t n) {
    std::uint64_t result = n;
    for (auto [p, e] : factorize(n)) result = result / p * (p - 1);
    return result;
}

/// Moebius function.
inline int moebius(std::uint64_t n) {
    int sign = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

inline std::uint64_t lcm_list(std::span<const std::uint64_t> values) {
    if (values.empty()) throw InvalidArgument("lcm_list: empty list");
    std::uint64_t acc = 1;
    for (auto v : values) {
        detail::require_positive(v, "lcm_list");
        acc = std::lcm(acc, v);
    }
    return acc;
}

inline std::uint64_t lcm_list(std::initializer_list<std::uint64_t> values) {
    return lcm_list(std::span<const std::uint64_t>(values.begin(), values.size()));
}

}  // namespace qftgi
