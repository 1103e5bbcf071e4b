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

#include "qftgi/optics.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace qftgi;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Eigen::MatrixXcd permutation_matrix(std::vector<int> perm) {
    const int n = static_cast<int>(perm.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    return p;
}

}  // namespace

TEST(optics, qft_small_cases) {
    EXPECT_NEAR(std::abs(qft_matrix(1)(0, 0) - Complex(1.0)), 0.0, 1e-15);
    const auto q2 = qft_matrix(2);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(q2(0, 0) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q2(0, 1) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q2(1, 0) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q2(1, 1) + h), 0.0, 1e-15);
    // 1-based entry (3,3) = omega^{2*2} / 2 = omega^4 / 2 = 1/2.
    EXPECT_NEAR(std::abs(qft_matrix(4)(2, 2) - Complex(0.5)), 0.0, 1e-15);
    EXPECT_THROW(qft_matrix(0), InvalidArgument);
}

TEST(optics, qft_is_unitary) {
    for (int m = 1; m <= 32; ++m)
        EXPECT_LT(UnitaryMatrix::unitarity_deviation(qft_matrix(m).matrix()), 1e-12) << m;
}

TEST(optics, non_unitary_rejected) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
    a(0, 1) = 0.1;
    EXPECT_THROW(UnitaryMatrix{a}, InvalidArgument);
    EXPECT_THROW(UnitaryMatrix{Eigen::MatrixXcd::Identity(2, 3)}, InvalidArgument);
}

TEST(optics, scattering_matrix_examples) {
    const double h = 1.0 / std::sqrt(2.0);
    const auto q2 = qft_matrix(2);
    const auto full = effective_scattering_matrix(q2, FockState{1, 1}, FockState{1, 1});
    EXPECT_LT((full.entries - q2.matrix()).cwiseAbs().maxCoeff(), 1e-15);

    const auto bunched = effective_scattering_matrix(q2, FockState{1, 1}, FockState{2, 0});
    EXPECT_LT((bunched.entries - Eigen::MatrixXcd::Constant(2, 2, h)).cwiseAbs().maxCoeff(), 1e-15);

    const auto q3 = effective_scattering_matrix(qft_matrix(3), FockState{1, 1, 1}, FockState{3, 0, 0});
    EXPECT_LT((q3.entries - Eigen::MatrixXcd::Constant(3, 3, 1.0 / std::sqrt(3.0))).cwiseAbs().maxCoeff(),
              1e-15);

    EXPECT_THROW(effective_scattering_matrix(q2, FockState{1, 1}, FockState{1, 0}), InvalidArgument);
    EXPECT_THROW(effective_scattering_matrix(q2, FockState{1, 1, 0}, FockState{1, 1, 0}), InvalidArgument);
}

TEST(optics, scattering_matrix_row_rule) {
    // Rows follow the output assignment, columns the input assignment.
    std::mt19937_64 rng(3);
    const UnitaryMatrix u(oracle::haar_unitary(4, rng));
    const FockState in{2, 0, 1, 0}, out{0, 1, 0, 2};
    const auto sm = effective_scattering_matrix(u, in, out);
    const std::vector<int> rows{1, 3, 3}, cols{0, 0, 2};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_EQ(sm.entries(a, b), u(rows[a], cols[b]));
}

TEST(optics, one_photon_per_mode_gives_u) {
    std::mt19937_64 rng(5);
    for (int m = 1; m <= 6; ++m) {
        const UnitaryMatrix u(oracle::haar_unitary(m, rng));
        const FockState ones(std::vector<int>(static_cast<std::size_t>(m), 1));
        EXPECT_EQ(effective_scattering_matrix(u, ones, ones).entries, u.matrix());
    }
}

TEST(optics, permanent_examples) {
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd::Ones(3, 3)) - Complex(6.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(qft_matrix(2).matrix())), 0.0, 1e-15);
    // Defining sum: 3! equal products (1/sqrt 3)^3.
    const Complex expected = 6.0 / std::pow(3.0, 1.5);
    EXPECT_NEAR(std::abs(permanent(Eigen::MatrixXcd::Constant(3, 3, 1.0 / std::sqrt(3.0))) - expected),
                0.0, 1e-12);
    EXPECT_NEAR(std::abs(expected - Complex(1.154701)), 0.0, 1e-6);
    EXPECT_EQ(permanent(Eigen::MatrixXd(0, 0)), 1.0);
    EXPECT_THROW(permanent(Eigen::MatrixXd(2, 3)), InvalidArgument);
    EXPECT_THROW(permanent(Eigen::MatrixXd::Zero(31, 31)), GuardError);
}

TEST(optics, permanent_naive_examples) {
    EXPECT_NEAR(std::abs(permanent_naive(Eigen::MatrixXcd::Identity(4, 4)) - Complex(1.0)), 0.0, 1e-15);
    Eigen::MatrixXcd one(1, 1);
    one(0, 0) = Complex(0.3, -2.0);
    EXPECT_EQ(permanent_naive(one), Complex(0.3, -2.0));
    EXPECT_THROW(permanent_naive(Eigen::MatrixXd::Zero(10, 10)), GuardError);
}

TEST(optics, ryser_matches_naive) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 8;
        const auto a = oracle::random_disk_matrix(n, rng);
        EXPECT_LT(rel_err(permanent(a), permanent_naive(a)), 1e-10) << "n=" << n;
    }
}

TEST(optics, permanent_permutation_invariance) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 6;
        const auto a = oracle::random_disk_matrix(n, rng);
        std::vector<int> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        std::iota(q.begin(), q.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        std::shuffle(q.begin(), q.end(), rng);
        const Eigen::MatrixXcd b = permutation_matrix(p) * a * permutation_matrix(q);
        EXPECT_LT(rel_err(permanent(b), permanent(a)), 1e-10);
    }
}

TEST(optics, permanent_real_and_complex_agree) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    Eigen::MatrixXd a(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a(i, j) = ur(rng);
    const Eigen::MatrixXcd ac = a.cast<Complex>();
    EXPECT_NEAR(permanent(a), permanent(ac).real(), 1e-12);
}
