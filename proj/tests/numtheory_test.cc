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

#include "qftgi/numtheory.hpp"

#include <numeric>

#include "gtest/gtest.h"

using namespace qftgi;

TEST(numtheory, divisors_examples) {
    EXPECT_EQ(divisors(1).divisors, (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(divisors(4).divisors, (std::vector<std::uint64_t>{1, 2, 4}));
    EXPECT_EQ(divisors(12).divisors, (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(divisors(36).divisors, (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 9, 12, 18, 36}));
    EXPECT_THROW(divisors(0), InvalidArgument);
}

TEST(numtheory, divisors_match_brute_force) {
    for (std::uint64_t n = 1; n <= 1000; ++n) {
        const auto d = divisors(n);
        std::size_t count = 0;
        for (std::uint64_t k = 1; k <= n; ++k) count += n % k == 0;
        ASSERT_EQ(d.size(), count) << n;
        EXPECT_EQ(d.divisors.front(), 1u);
        EXPECT_EQ(d.divisors.back(), n);
        EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
        for (auto v : d) EXPECT_EQ(n % v, 0u);
    }
}

TEST(numtheory, totient_examples) {
    EXPECT_EQ(totient(1), 1u);
    EXPECT_EQ(totient(7), 6u);
    EXPECT_EQ(totient(12), 4u);
    EXPECT_THROW(totient(0), InvalidArgument);
}

TEST(numtheory, totient_counts_coprimes) {
    for (std::uint64_t n = 1; n <= 300; ++n) {
        std::uint64_t count = 0;
        for (std::uint64_t k = 1; k <= n; ++k) count += std::gcd(k, n) == 1;
        EXPECT_EQ(totient(n), count) << n;
    }
}

TEST(numtheory, moebius_examples) {
    EXPECT_EQ(moebius(1), 1);
    EXPECT_EQ(moebius(4), 0);
    EXPECT_EQ(moebius(6), 1);
    EXPECT_EQ(moebius(30), -1);
    EXPECT_THROW(moebius(0), InvalidArgument);
}

TEST(numtheory, lcm_list_examples) {
    EXPECT_EQ(lcm_list({2, 4, 4}), 4u);
    EXPECT_EQ(lcm_list({1}), 1u);
    EXPECT_EQ(lcm_list({3, 5}), 15u);
    EXPECT_THROW(lcm_list(std::span<const std::uint64_t>{}), InvalidArgument);
}

TEST(numtheory, totient_is_multiplicative) {
    for (std::uint64_t a = 1; a <= 50; ++a)
        for (std::uint64_t b = 1; b <= 50; ++b)
            if (std::gcd(a, b) == 1) EXPECT_EQ(totient(a * b), totient(a) * totient(b)) << a << "," << b;
}

TEST(numtheory, divisor_sums) {
    for (std::uint64_t n = 1; n <= 200; ++n) {
        std::uint64_t phi_sum = 0;
        int mu_sum = 0;
        for (auto d : divisors(n)) {
            phi_sum += totient(d);
            mu_sum += moebius(d);
        }
        EXPECT_EQ(phi_sum, n);
        EXPECT_EQ(mu_sum, n == 1 ? 1 : 0) << n;
    }
}

TEST(numtheory, primes) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 0; n < 30; ++n)
        if (is_prime(n)) primes.push_back(n);
    EXPECT_EQ(primes, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
    EXPECT_EQ(factorize(360), (std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 2}, {5, 1}}));
}
