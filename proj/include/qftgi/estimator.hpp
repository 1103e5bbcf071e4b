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

// Genuine-indistinguishability (c1) estimators, shot-count calculators, the
// cyclic-interferometer baseline and detector corrections.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qftgi/errors.hpp"
#include "qftgi/numtheory.hpp"
#include "qftgi/probability.hpp"

namespace qftgi {

enum class EstimateMethod { prime_closed_form, nonprime_pseudoinverse, ci_fringe, exact };

inline std::string_view to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::prime_closed_form: return "prime_closed_form";
        case EstimateMethod::nonprime_pseudoinverse: return "nonprime_pseudoinverse";
        case EstimateMethod::ci_fringe: return "ci_fringe";
        case EstimateMethod::exact: return "exact";
    }
    return "exact";
}

inline EstimateMethod estimate_method_from_string(std::string_view s) {
    for (auto m : {EstimateMethod::prime_closed_form, EstimateMethod::nonprime_pseudoinverse,
                   EstimateMethod::ci_fringe, EstimateMethod::exact})
        if (to_string(m) == s) return m;
    throw InvalidArgument("unknown estimate method '" + std::string(s) + "'");
}

/// Estimated c1. `pre_clip` keeps the raw value before clamping to [0, 1].
/// `shots == 0` marks an exact (infinite-sample) input, the only case with
/// a zero standard error by construction.
struct GIEstimate {
    double c1 = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
    EstimateMethod method = EstimateMethod::exact;
    double pre_clip = 0.0;

    friend bool operator==(const GIEstimate&, const GIEstimate&) = default;
};

namespace detail {

inline GIEstimate clipped(double raw, double std_error, std::uint64_t shots, EstimateMethod method) {
    return GIEstimate{std::clamp(raw, 0.0, 1.0), std_error, shots, method, raw};
}

/// ceil() that ignores representation noise just above an exact integer.
inline double ceil_count(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
    return std::ceil(v);
}

}  // namespace detail

/// c1 = 1 - P(Q != 0) n / (n - 1). Valid for prime n and for OBB mixtures.
/// With finite shots the error uses the binomial plug-in variance of
/// P(Q != 0), floored at one count.
inline GIEstimate estimate_c1_prime(double p_q_nonzero, int n,
                                    std::optional<std::uint64_t> shots = std::nullopt) {
    if (n < 2) throw InvalidArgument("estimate_c1_prime: n must be >= 2");
    if (!(p_q_nonzero >= 0.0 && p_q_nonzero <= 1.0))
        throw InvalidArgument("estimate_c1_prime: P(Q != 0) must lie in [0, 1]");
    const double success = 1.0 - 1.0 / n;
    const double raw = (success - p_q_nonzero) / success;
    if (!shots) return detail::clipped(raw, 0.0, 0, EstimateMethod::exact);
    if (*shots == 0) throw InvalidArgument("estimate_c1_prime: shots must be positive");
    const double N = static_cast<double>(*shots);
    const double var_p = std::max(p_q_nonzero * (1.0 - p_q_nonzero), 1.0 / N) / N;
    return detail::clipped(raw, std::sqrt(var_p) / success, *shots,
                           EstimateMethod::prime_closed_form);
}

/// n x x(n) system matrix: rows Q = 0..n-1, columns the divisors t of n,
/// entry 1/t when Q = 0 mod n/t.
struct AMatrix {
    int n = 0;
    DivisorList divisors;
    Eigen::MatrixXd entries;
};

inline AMatrix build_a_matrix(int n) {
    if (n < 2) throw InvalidArgument("build_a_matrix: n must be >= 2");
    AMatrix a{n, divisors(static_cast<std::uint64_t>(n)), {}};
    a.entries = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(a.divisors.size()));
    for (std::size_t c = 0; c < a.divisors.size(); ++c) {
        const int t = static_cast<int>(a.divisors[c]);
        for (int q = 0; q < n; q += n / t) a.entries(q, static_cast<Eigen::Index>(c)) = 1.0 / t;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a.entries);
    if (lu.rank() != static_cast<Eigen::Index>(a.divisors.size()))
        throw NumericalError("build_a_matrix: columns are linearly dependent");
    return a;
}

namespace detail {

/// Closed-form pseudo-inverse entry for divisor row i and gcd-group g = n / gcd(n, Q).
inline double pinv_entry(std::uint64_t i, std::uint64_t g) {
    if (g % i != 0) return 0.0;
    return static_cast<double>(i) / static_cast<double>(totient(g)) * moebius(g / i);
}

}  // namespace detail

/// x(n) x n matrix, rows over the divisors i of n, columns over Q = 0..n-1:
/// (i / phi(g)) mu(g / i) when i | g, else 0, with g = n / gcd(n, Q).
/// Q = 0 stands for the index j = n; gcd(n, 0) = n gives the same g = 1.
inline Eigen::MatrixXd pseudo_inverse_analytic(int n) {
    if (n < 2) throw InvalidArgument("pseudo_inverse_analytic: n must be >= 2");
    const auto divs = divisors(static_cast<std::uint64_t>(n));
    const auto un = static_cast<std::uint64_t>(n);
    Eigen::MatrixXd p(static_cast<Eigen::Index>(divs.size()), n);
    for (std::size_t r = 0; r < divs.size(); ++r)
        for (int q = 0; q < n; ++q) {
            const std::uint64_t g = un / std::gcd(un, static_cast<std::uint64_t>(q));
            p(static_cast<Eigen::Index>(r), q) = detail::pinv_entry(divs[r], g);
        }
    return p;
}

/// (A^T A)^{-1} A^T via the x(n) x x(n) normal equations.
inline Eigen::MatrixXd pseudo_inverse_numeric(const AMatrix& a) {
    const Eigen::MatrixXd normal = a.entries.transpose() * a.entries;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    if (!lu.isInvertible()) throw NumericalError("pseudo_inverse_numeric: A is rank deficient");
    return lu.solve(a.entries.transpose());
}

/// Periodicity weights c_t, one per divisor t of n (t = 1 first).
struct CoefficientVector {
    int n = 0;
    DivisorList divisors;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
};

struct CoefficientEstimate {
    CoefficientVector coefficients;
    GIEstimate gi;
};

/// c = A^+ P. Each gcd-grouped marginal P(gcd(Q, n) = k) is treated as an
/// independent estimate with variance at most 1 / shots, so
/// Var[c_i] <= (1 / shots) sum_{g | n} (A^+_{i, g})^2.
inline CoefficientEstimate estimate_c_vector(const QMarginalDistribution& marginals, int n,
                                             std::optional<std::uint64_t> shots = std::nullopt) {
    if (n < 2) throw InvalidArgument("estimate_c_vector: n must be >= 2");
    if (marginals.size() != static_cast<std::size_t>(n))
        throw InvalidArgument("estimate_c_vector: expected " + std::to_string(n) +
                              " marginals, got " + std::to_string(marginals.size()));
    if (shots && *shots == 0) throw InvalidArgument("estimate_c_vector: shots must be positive");

    const auto pinv = pseudo_inverse_analytic(n);
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(marginals.probabilities.data(), n);
    const Eigen::VectorXd c = pinv * p;

    CoefficientEstimate out;
    out.coefficients.n = n;
    out.coefficients.divisors = divisors(static_cast<std::uint64_t>(n));
    out.coefficients.coefficients.assign(c.data(), c.data() + c.size());
    out.coefficients.std_errors.assign(out.coefficients.divisors.size(), 0.0);
    if (shots) {
        const double N = static_cast<double>(*shots);
        const auto& divs = out.coefficients.divisors;
        for (std::size_t r = 0; r < divs.size(); ++r) {
            double sum_sq = 0.0;
            for (auto g : divs) sum_sq += std::pow(detail::pinv_entry(divs[r], g), 2);
            out.coefficients.std_errors[r] = std::sqrt(sum_sq / N);
        }
    }
    out.gi = detail::clipped(c(0), out.coefficients.std_errors[0], shots.value_or(0),
                             shots ? EstimateMethod::nonprime_pseudoinverse : EstimateMethod::exact);
    return out;
}

struct ErrorAmplification {
    double ratio;                  // n / phi(n): error on c1 per unit error on the marginals
    std::uint64_t divisor_bound;   // x(n) >= n / phi(n)
    double variance_factor;        // exact sum_g (A^+_{1,g})^2 <= ratio^2
};

inline ErrorAmplification error_amplification(int n) {
    if (n < 2) throw InvalidArgument("error_amplification: n must be >= 2");
    const auto un = static_cast<std::uint64_t>(n);
    const auto divs = divisors(un);
    double var = 0.0;
    for (auto g : divs) var += std::pow(detail::pinv_entry(1, g), 2);
    return {static_cast<double>(n) / static_cast<double>(totient(un)), divs.size(), var};
}

enum class SampleBound { automatic, hoeffding, chebyshev };

namespace detail {

inline void check_confidence(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
}

inline double hoeffding_base(double epsilon, double delta) {
    return std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
}

}  // namespace detail

/// Shots for |c1_hat - c1| <= epsilon with probability >= 1 - delta.
/// Prime n: Hoeffding on P(Q != 0), scaled by (n / (n - 1))^2.
/// Non-prime n: Chebyshev x(n)^2 / (epsilon^2 delta) by default, or the
/// Hoeffding form with (n / phi(n))^2 when requested.
inline std::uint64_t shots_required_qft(double epsilon, double delta, int n,
                                        SampleBound bound = SampleBound::automatic) {
    detail::check_confidence(epsilon, delta);
    if (n < 2) throw InvalidArgument("shots_required_qft: n must be >= 2");
    const auto un = static_cast<std::uint64_t>(n);
    if (bound == SampleBound::automatic)
        bound = is_prime(un) ? SampleBound::hoeffding : SampleBound::chebyshev;
    double shots;
    if (bound == SampleBound::hoeffding) {
        const double amp = static_cast<double>(n) / static_cast<double>(totient(un));
        shots = detail::hoeffding_base(epsilon, delta) * amp * amp;
    } else {
        const double x = static_cast<double>(divisors(un).size());
        shots = x * x / (epsilon * epsilon * delta);
    }
    return static_cast<std::uint64_t>(detail::ceil_count(shots));
}

/// Post-selection scale of the cyclic-interferometer baseline: all combined
/// outputs (1/2^n) or a single output pattern (1/2^(2n-1)).
enum class CiScale { combined_outputs, single_output };

inline constexpr int kMaxCiPhotons = 48;

/// Hoeffding shots for the baseline: ceil(ln(2/delta) / (2 epsilon^2)) times
/// the squared inverse post-selection scale (4^n or 4^(2n-1)). Returned as
/// a double holding an exact integer; values exceed 64-bit range quickly.
inline double shots_required_ci(double epsilon, double delta, int n,
                                CiScale scale = CiScale::combined_outputs) {
    detail::check_confidence(epsilon, delta);
    if (n < 1) throw InvalidArgument("shots_required_ci: n must be >= 1");
    if (n > kMaxCiPhotons)
        throw GuardError("shots_required_ci: n = " + std::to_string(n) + " exceeds limit " +
                         std::to_string(kMaxCiPhotons));
    const double base = detail::ceil_count(detail::hoeffding_base(epsilon, delta));
    const int exponent = scale == CiScale::combined_outputs ? n : 2 * n - 1;
    return std::ldexp(base, 2 * exponent);
}

/// Post-selected baseline probability (1 + (-1)^n c1 cos(alpha)) / 2^(2n-1)
/// (single output) or / 2^n (combined outputs).
inline double ci_fringe_probability(int n, double c1, double alpha,
                                    CiScale scale = CiScale::single_output) {
    if (n < 1) throw InvalidArgument("ci_fringe_probability: n must be >= 1");
    if (!(c1 >= 0.0 && c1 <= 1.0)) throw InvalidArgument("ci_fringe_probability: c1 must lie in [0, 1]");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const int exponent = scale == CiScale::single_output ? 2 * n - 1 : n;
    return std::ldexp(1.0 + sign * c1 * std::cos(alpha), -exponent);
}

/// One phase setting of a fringe scan. `hits` may be fractional when
/// feeding expected (noiseless) counts.
struct PhaseSample {
    double alpha;
    double hits;
    std::uint64_t shots;
};

/// Linear least squares of p(alpha) = B + (B V) cos(alpha); c1 = |V|.
/// The error on V comes from the residual-variance covariance of (B, B V)
/// propagated through V = (B V) / B.
inline GIEstimate fit_ci_fringe(std::span<const PhaseSample> samples) {
    std::set<double> phases;
    for (const auto& s : samples) phases.insert(s.alpha);
    if (phases.size() < 3)
        throw InvalidArgument("fit_ci_fringe: need at least 3 distinct phases, got " +
                              std::to_string(phases.size()));
    const auto k = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd x(k, 2);
    Eigen::VectorXd y(k);
    std::uint64_t total_shots = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (s.shots == 0) throw InvalidArgument("fit_ci_fringe: phase with zero shots");
        x(i, 0) = 1.0;
        x(i, 1) = std::cos(s.alpha);
        y(i) = s.hits / static_cast<double>(s.shots);
        total_shots += s.shots;
    }
    const Eigen::Matrix2d normal = x.transpose() * x;
    Eigen::FullPivLU<Eigen::Matrix2d> lu(normal);
    if (!lu.isInvertible() || std::abs(normal.determinant()) < 1e-12 * normal.squaredNorm())
        throw InvalidArgument("fit_ci_fringe: degenerate design matrix (cos(alpha) is constant)");
    const Eigen::Vector2d beta = lu.solve(x.transpose() * y);
    const double base = beta(0), slope = beta(1);
    if (!(base > 0.0)) throw NumericalError("fit_ci_fringe: fitted offset is not positive");

    const double rss = (y - x * beta).squaredNorm();
    const double s2 = k > 2 ? rss / static_cast<double>(k - 2) : 0.0;
    const Eigen::Matrix2d cov = s2 * lu.inverse();
    const Eigen::Vector2d grad(-slope / (base * base), 1.0 / base);
    const double var_v = std::max(0.0, grad.dot(cov * grad));
    return detail::clipped(std::abs(slope / base), std::sqrt(var_v), total_shots,
                           EstimateMethod::ci_fringe);
}

struct Ratio {
    std::uint64_t num;
    std::uint64_t den;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// 1 / p_ppnr with p_ppnr = C(m, k) k! / m^k = m! / ((m - k)! m^k), reduced.
inline Ratio ppnr_correction_ratio(int detector_modes, int photons) {
    if (detector_modes < 1 || photons < 1)
        throw InvalidArgument("ppnr_correction: arguments must be positive");
    if (photons > detector_modes)
        throw InvalidArgument("ppnr_correction: cannot resolve " + std::to_string(photons) +
                              " photons with " + std::to_string(detector_modes) + " detector modes");
    if (detector_modes > 15) throw GuardError("ppnr_correction: detector_modes > 15 overflows");
    std::uint64_t num = 1, den = 1;
    for (int i = 0; i < photons; ++i) {
        num *= static_cast<std::uint64_t>(detector_modes);
        den *= static_cast<std::uint64_t>(detector_modes - i);
    }
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
}

inline double ppnr_correction(int detector_modes, int photons) {
    return ppnr_correction_ratio(detector_modes, photons).value();
}

}  // namespace qftgi
