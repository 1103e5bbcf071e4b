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

// JSON and CSV encodings. Floats in CSV use 17 significant digits; JSON
// numbers use the shortest representation that round-trips exactly.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qftgi/errors.hpp"
#include "qftgi/estimator.hpp"
#include "qftgi/optics.hpp"
#include "qftgi/probability.hpp"
#include "qftgi/sampler.hpp"
#include "qftgi/states.hpp"

namespace qftgi {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join(const std::vector<int>& values, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

// --- states ---------------------------------------------------------------

inline json to_json(const PartitionState& s) {
    return json{{"occupations", s.occupations().occupations()}, {"registers", s.registers()}};
}

inline PartitionState partition_state_from_json(const json& j) {
    try {
        return PartitionState(FockState(j.at("occupations").get<std::vector<int>>()),
                              j.at("registers").get<std::vector<int>>());
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("PartitionState JSON: ") + e.what());
    }
}

inline json to_json(const PartitionMixture& m) {
    json comps = json::array();
    for (const auto& c : m.components()) comps.push_back({{"weight", c.weight}, {"state", to_json(c.state)}});
    return json{{"components", comps}};
}

inline PartitionMixture partition_mixture_from_json(const json& j) {
    try {
        std::vector<PartitionMixture::Component> comps;
        for (const auto& c : j.at("components"))
            comps.push_back({c.at("weight").get<double>(), partition_state_from_json(c.at("state"))});
        return PartitionMixture(std::move(comps));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("PartitionMixture JSON: ") + e.what());
    }
}

// --- matrices -------------------------------------------------------------

/// Nested rows of [re, im] pairs.
inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline ComplexMatrix complex_matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
            throw InvalidArgument("matrix JSON: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = Complex(j.at(r).at(c).at(0).get<double>(), j.at(r).at(c).at(1).get<double>());
    }
    return m;
}

// --- distributions --------------------------------------------------------

/// Header `occupations,q_value,probability`; occupations are space separated.
inline std::string to_csv(const OutputDistribution& d) {
    std::ostringstream os;
    os << "occupations,q_value,probability\n";
    for (const auto& [s, p] : d.entries)
        os << join(s.occupations(), ' ') << ',' << q_value(s) << ',' << format_double(p) << '\n';
    return os.str();
}

inline json to_json(const OutputDistribution& d) {
    json rows = json::array();
    for (const auto& [s, p] : d.entries)
        rows.push_back({{"occupations", s.occupations()}, {"q_value", q_value(s)}, {"probability", p}});
    return json{{"entries", rows}};
}

inline OutputDistribution output_distribution_from_json(const json& j) {
    OutputDistribution d;
    for (const auto& e : j.at("entries"))
        d.entries.emplace_back(FockState(e.at("occupations").get<std::vector<int>>()),
                               e.at("probability").get<double>());
    return d;
}

/// Header `q,probability`.
inline std::string to_csv(const QMarginalDistribution& q) {
    std::ostringstream os;
    os << "q,probability\n";
    for (std::size_t k = 0; k < q.size(); ++k) os << k << ',' << format_double(q[k]) << '\n';
    return os.str();
}

inline json to_json(const QMarginalDistribution& q) { return json{{"probabilities", q.probabilities}}; }

inline QMarginalDistribution q_marginals_from_json(const json& j) {
    return {j.at("probabilities").get<std::vector<double>>()};
}

// --- estimates and experiments --------------------------------------------

inline json to_json(const GIEstimate& e) {
    return json{{"c1", e.c1},
                {"stderr", e.std_error},
                {"shots", e.shots},
                {"method", std::string(to_string(e.method))},
                {"pre_clip", e.pre_clip}};
}

inline GIEstimate gi_estimate_from_json(const json& j) {
    return GIEstimate{j.at("c1").get<double>(), j.at("stderr").get<double>(),
                      j.at("shots").get<std::uint64_t>(),
                      estimate_method_from_string(j.at("method").get<std::string>()),
                      j.at("pre_clip").get<double>()};
}

inline json to_json(const ShotTally& t) {
    json j{{"q_counts", t.q_counts}, {"total_shots", t.total_shots}, {"seed", t.seed}};
    if (!t.corrected.empty()) {
        j["corrected"] = t.corrected;
        j["discarded"] = t.discarded;
    }
    return j;
}

inline ShotTally shot_tally_from_json(const json& j) {
    ShotTally t;
    t.q_counts = j.at("q_counts").get<std::vector<std::uint64_t>>();
    t.total_shots = j.at("total_shots").get<std::uint64_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("corrected")) {
        t.corrected = j.at("corrected").get<std::vector<double>>();
        t.discarded = j.at("discarded").get<std::uint64_t>();
    }
    return t;
}

inline json to_json(const CoefficientVector& c) {
    return json{{"n", c.n},
                {"divisors", c.divisors.divisors},
                {"coefficients", c.coefficients},
                {"stderr", c.std_errors}};
}

/// Wall time is left out unless asked for, so that seeded runs serialize
/// byte-identically.
inline json to_json(const ExperimentResult& r, bool include_timing = false) {
    json j{{"estimate", to_json(r.estimate)}};
    if (r.coefficients) j["coefficients"] = to_json(*r.coefficients);
    if (r.tally) {
        j["tally"] = to_json(*r.tally);
        j["frequencies"] = r.frequencies.probabilities;
    }
    if (!r.phase_samples.empty()) {
        json ph = json::array();
        for (const auto& s : r.phase_samples)
            ph.push_back({{"alpha", s.alpha}, {"hits", s.hits}, {"shots", s.shots}});
        j["phases"] = ph;
    }
    j["true_c1"] = r.true_c1 ? json(*r.true_c1) : json(nullptr);
    if (include_timing) j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

inline std::string comparison_csv_header() { return "n,prime,qft_shots,ci_shots,ratio"; }

inline std::string to_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream os;
    os << comparison_csv_header() << '\n';
    for (const auto& r : rows)
        os << r.n << ',' << (r.prime ? 1 : 0) << ',' << r.qft_shots << ',' << format_double(r.ci_shots)
           << ',' << format_double(r.ratio) << '\n';
    return os.str();
}

}  // namespace qftgi
