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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qftgi/errors.hpp"
#include "qftgi/states.hpp"

namespace qftgi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Square complex matrix, unitary to within `kUnitarityTolerance` (checked on construction).
class UnitaryMatrix {
public:
    static constexpr double kUnitarityTolerance = 1e-10;

    explicit UnitaryMatrix(ComplexMatrix entries) : u_(std::move(entries)) {
        if (u_.rows() != u_.cols() || u_.rows() == 0)
            throw InvalidArgument("UnitaryMatrix: must be square and non-empty");
        const double dev = unitarity_deviation(u_);
        if (dev > kUnitarityTolerance)
            throw InvalidArgument("UnitaryMatrix: U U^dagger deviates from identity by " +
                                  std::to_string(dev));
    }

    static double unitarity_deviation(const ComplexMatrix& u) {
        const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
        return (u * u.adjoint() - id).cwiseAbs().maxCoeff();
    }

    static UnitaryMatrix identity(int m) { return UnitaryMatrix(ComplexMatrix::Identity(m, m)); }

    const ComplexMatrix& matrix() const { return u_; }
    int modes() const { return static_cast<int>(u_.rows()); }
    Complex operator()(int row, int col) const { return u_(row, col); }

private:
    ComplexMatrix u_;
};

/// entries(j, k) = omega^{j k} / sqrt(m), omega = exp(2 pi i / m), 0-based j, k.
inline UnitaryMatrix qft_matrix(int m) {
    if (m < 1) throw InvalidArgument("qft_matrix: m must be >= 1");
    ComplexMatrix u(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            // Reduce the exponent first so large m keeps full phase accuracy.
            const long long e = (static_cast<long long>(j) * k) % m;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(e) / m;
            u(j, k) = std::polar(norm, phase);
        }
    return UnitaryMatrix(std::move(u));
}

/// Sub-matrix of U governing an input -> output transition: rows follow the
/// output mode assignment, columns the input mode assignment.
struct ScatteringMatrix {
    ComplexMatrix entries;
    ModeAssignment input;
    ModeAssignment output;
};

inline ScatteringMatrix effective_scattering_matrix(const UnitaryMatrix& u, const FockState& input,
                                                    const FockState& output) {
    if (input.modes() != u.modes() || output.modes() != u.modes())
        throw InvalidArgument("effective_scattering_matrix: mode count mismatch (U has " +
                              std::to_string(u.modes()) + " modes)");
    if (input.photons() != output.photons())
        throw InvalidArgument("effective_scattering_matrix: photon number mismatch");
    ScatteringMatrix sm{ComplexMatrix(input.photons(), input.photons()), mode_assignment(input),
                        mode_assignment(output)};
    const int n = input.photons();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sm.entries(a, b) = u(sm.output[a] - 1, sm.input[b] - 1);
    return sm;
}

inline constexpr int kMaxPermanentSize = 30;
inline constexpr int kMaxNaivePermanentSize = 9;

/// Ryser inclusion-exclusion over column subsets, visited in Gray-code order
/// so each step adds or removes one column from the running row sums.
/// O(2^n n) time; works for any scalar (double or complex).
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw InvalidArgument("permanent: matrix must be square");
    const int n = static_cast<int>(a.rows());
    if (n > kMaxPermanentSize)
        throw GuardError("permanent: n = " + std::to_string(n) + " exceeds limit " +
                         std::to_string(kMaxPermanentSize));
    if (n == 0) return Scalar(1);

    std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar(0));
    Scalar total(0);
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const int col = std::countr_zero(k);
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        if (gray & bit) {
            for (int i = 0; i < n; ++i) row_sums[i] += a(i, col);
        } else {
            for (int i = 0; i < n; ++i) row_sums[i] -= a(i, col);
        }
        Scalar prod = row_sums[0];
        for (int i = 1; i < n; ++i) prod *= row_sums[i];
        // (-1)^{n - |S|}
        if (((n - std::popcount(gray)) & 1) != 0)
            total -= prod;
        else
            total += prod;
    }
    return total;
}

/// Sum over all n! permutations; reference implementation for small n.
template <typename Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw InvalidArgument("permanent_naive: matrix must be square");
    const int n = static_cast<int>(a.rows());
    if (n > kMaxNaivePermanentSize)
        throw GuardError("permanent_naive: n = " + std::to_string(n) + " exceeds limit " +
                         std::to_string(kMaxNaivePermanentSize));
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[i] = i;
    Scalar total(0);
    do {
        Scalar prod(1);
        for (int i = 0; i < n; ++i) prod *= a(i, perm[i]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace qftgi
