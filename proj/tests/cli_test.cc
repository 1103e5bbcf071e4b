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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "qftgi/io.hpp"

using namespace qftgi;

namespace {

struct Run {
    int code;
    std::string out;
};

/// Runs the CLI with `args`; stdout is captured, stderr discarded.
Run run(const std::string& args) {
    const std::string cmd = std::string(QFTGI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto p = std::filesystem::temp_directory_path() / ("qftgi_cli_test_" + name);
    std::ofstream(p) << contents;
    return p;
}

}  // namespace

TEST(cli, hom_probability_is_zero) {
    const auto r = run("prob --unitary qft --n 2 --registers 1,1 --output 1,1");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 0.0, 1e-12);
    const auto d = run("prob --unitary qft --n 2 --registers 1,2 --output 1,1");
    EXPECT_NEAR(std::stod(d.out), 0.5, 1e-12);
}

TEST(cli, q_marginals_of_distinguishable_input) {
    const auto r = run("prob --unitary qft --n 3 --registers 1,2,3 --q-marginals");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "q,probability");
    for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(l[k + 1].substr(0, 2), std::to_string(k) + ",");
        EXPECT_NEAR(std::stod(l[k + 1].substr(2)), 1.0 / 3.0, 1e-12);
    }
    const auto a = run("prob --n 3 --registers 1,2,3 --q-marginals --analytic --format json");
    ASSERT_EQ(a.code, 0);
    for (double p : json::parse(a.out).at("q_marginals").at("probabilities")) EXPECT_NEAR(p, 1.0 / 3.0, 1e-12);
}

TEST(cli, distribution_json_round_trips) {
    const auto r = run("prob --n 3 --registers 1,1,2 --distribution --format json");
    ASSERT_EQ(r.code, 0);
    const auto d = output_distribution_from_json(json::parse(r.out).at("distribution"));
    const auto want = output_distribution(qft_matrix(3), PartitionState::one_per_mode({1, 1, 2}));
    ASSERT_EQ(d.entries.size(), want.entries.size());
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
        EXPECT_EQ(d.entries[i].first, want.entries[i].first);
        EXPECT_EQ(d.entries[i].second, want.entries[i].second);
    }
}

TEST(cli, unitary_dump_and_file) {
    const auto r = run("prob --n 4 --dump-unitary --format json");
    ASSERT_EQ(r.code, 0);
    const auto m = complex_matrix_from_json(json::parse(r.out).at("unitary"));
    EXPECT_EQ((m - qft_matrix(4).matrix()).cwiseAbs().maxCoeff(), 0.0);
    const auto f = temp_file("u.json", json::parse(r.out).at("unitary").dump());
    const auto p = run("prob --unitary-file " + f.string() + " --registers 1,1,1,1 --output 2,0,2,0");
    EXPECT_EQ(p.code, 0);
    EXPECT_EQ(std::stod(p.out), p_indistinguishable(qft_matrix(4), FockState{1, 1, 1, 1}, FockState{2, 0, 2, 0}));
}

TEST(cli, usage_errors_exit_2) {
    EXPECT_EQ(run("prob --n 3 --registers 1,x,3 --q-marginals").code, 2);
    EXPECT_EQ(run("prob --n 3 --registers 1,,3 --q-marginals").code, 2);
    EXPECT_EQ(run("prob --n 3 --registers 0,1,2 --q-marginals").code, 2);
    EXPECT_EQ(run("prob --n 3 --output 1,1,1,1").code, 2);
    EXPECT_EQ(run("prob --n 3 --unitary hadamard --output 1,1,1").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("estimate --mixture-file /nonexistent/mixture.json").code, 2);
    EXPECT_EQ(run("estimate --mixture 0.8:1,1,1 --shots 100").code, 2);  // weights do not sum to 1
    EXPECT_EQ(run("estimate --n 3 --c1 0.8 --shots 100 --epsilon 0.1").code, 2);
    EXPECT_EQ(run("estimate --n 3 --c1 0.8 --mixture 1:1,1,1").code, 2);
    EXPECT_EQ(run("compare --n-min 10 --n-max 9").code, 2);
    EXPECT_EQ(run("compare --n-range 3").code, 2);
    EXPECT_EQ(run("verify").code, 2);
    EXPECT_EQ(run("verify --uniformity --m 6 --t 4").code, 2);
}

TEST(cli, guard_violations_exit_3) {
    EXPECT_EQ(run("prob --n 14 --distribution").code, 3);
    EXPECT_EQ(run("verify --theorem1 --n 13").code, 3);
    const std::string cmd = std::string(QFTGI_CLI_PATH) + " compare --n-min 2 --n-max 50 2>&1 >/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char buf[512] = {};
    const auto n = std::fread(buf, 1, sizeof buf - 1, pipe);
    const int status = pclose(pipe);
    EXPECT_EQ(WEXITSTATUS(status), 3);
    EXPECT_NE(std::string(buf, n).find("exceeds"), std::string::npos);
}

TEST(cli, estimate_qft_synthetic) {
    const auto r = run("estimate --n 3 --c1 0.815 --seed 7");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    const auto e = gi_estimate_from_json(j.at("estimate"));
    EXPECT_EQ(e.method, EstimateMethod::prime_closed_form);
    EXPECT_EQ(e.shots, shots_required_qft(0.05, 0.005, 3));
    EXPECT_NEAR(e.c1, 0.815, 0.05);
    EXPECT_EQ(j.at("true_c1").get<double>(), 0.815);
    EXPECT_EQ(shot_tally_from_json(j.at("tally")).total_shots, e.shots);
}

TEST(cli, estimate_is_seed_reproducible) {
    const std::string args = "estimate --mixture \"0.6:1,1,1,1;0.1:1,2,1,2;0.3:1,2,3,4\" --shots 20000 ";
    const auto a = run(args + "--seed 11 --threads 1");
    const auto b = run(args + "--seed 11 --threads 3");
    const auto c = run(args + "--seed 12");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    const auto j = json::parse(a.out);
    EXPECT_EQ(j.at("estimate").at("method"), "nonprime_pseudoinverse");
    EXPECT_EQ(j.at("coefficients").at("coefficients").size(), 3u);
}

TEST(cli, estimate_ci_fringe) {
    const auto r = run("estimate --protocol ci --n 3 --c1 0.8 --phases 21 --seed 5");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    const auto e = gi_estimate_from_json(j.at("estimate"));
    EXPECT_EQ(e.method, EstimateMethod::ci_fringe);
    EXPECT_EQ(j.at("phases").size(), 21u);
    EXPECT_NEAR(e.c1, 0.8, 4 * e.std_error);
}

TEST(cli, estimate_from_config_and_files) {
    const PartitionMixture mix({{0.7, PartitionState::one_per_mode({1, 1, 1})},
                                {0.3, PartitionState::one_per_mode({1, 2, 3})}});
    const auto mfile = temp_file("mix.json", to_json(mix).dump());
    const auto out = std::filesystem::temp_directory_path() / "qftgi_cli_test_result.json";
    std::filesystem::remove(out);
    const auto cfg = temp_file("cfg.json", json{{"protocol", "qft"},
                                                {"mixture_file", mfile.string()},
                                                {"shots", 5000},
                                                {"seed", 3},
                                                {"dump_marginals", true},
                                                {"output", out.string()}}
                                               .dump());
    const auto r = run("estimate --config " + cfg.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    const auto j = json::parse(in);
    EXPECT_EQ(j.at("estimate").at("shots"), 5000);
    EXPECT_EQ(j.at("seed"), 3);
    EXPECT_NEAR(j.at("exact_marginals").at(0).get<double>(), 0.7 + 0.3 / 3, 1e-12);

    const auto inline_file = temp_file("mix.txt", "0.7:1,1,1;\n0.3:1,2,3\n");
    const auto r2 = run("estimate --mixture-file " + inline_file.string() + " --shots 5000 --seed 3 --dump-marginals");
    ASSERT_EQ(r2.code, 0);
    EXPECT_EQ(json::parse(r2.out), json::parse(std::ifstream(out)));

    EXPECT_EQ(run("estimate --config " + temp_file("bad.json", "{\"nope\": 1}").string()).code, 2);
    EXPECT_EQ(run("estimate --config " + temp_file("bad2.json", "{not json").string()).code, 2);
}

TEST(cli, estimate_ppnr) {
    const auto r = run("estimate --n 3 --c1 0.5 --shots 20000 --ppnr");
    ASSERT_EQ(r.code, 0);
    const auto t = shot_tally_from_json(json::parse(r.out).at("tally"));
    EXPECT_GT(t.discarded, 0u);
    EXPECT_EQ(t.corrected.size(), 3u);
}

TEST(cli, compare_table) {
    const auto r = run("compare --n-min 2 --n-max 30 --epsilon 0.05 --delta 0.005");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 30u);
    EXPECT_EQ(l[0], "n,prime,qft_shots,ci_shots,ratio");
    const auto rows = compare_protocols([] {
        std::vector<int> v;
        for (int n = 2; n <= 30; ++n) v.push_back(n);
        return v;
    }(), 0.05, 0.005);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::istringstream is(l[i + 1]);
        std::string n, prime, qft;
        std::getline(is, n, ',');
        std::getline(is, prime, ',');
        std::getline(is, qft, ',');
        EXPECT_EQ(std::stoi(n), rows[i].n);
        EXPECT_EQ(std::stoull(qft), rows[i].qft_shots);
        if (prime == "1" && rows[i].n >= 3) {
            EXPECT_LE(std::stoull(qft), 2700u);
        }
    }
    const auto alt = run("compare --n-range 2..30");
    EXPECT_EQ(alt.out, r.out);
    EXPECT_EQ(json::parse(run("compare --n-range 3..5 --format json").out).at("rows").size(), 3u);
}

TEST(cli, verify_suites) {
    auto ztl = run("verify --ztl --n 5");
    EXPECT_EQ(ztl.code, 0);
    EXPECT_EQ(ztl.out.rfind("PASS ztl n=5 max_deviation=", 0), 0u);
    const auto dev = std::stod(ztl.out.substr(ztl.out.find('=', 12) + 1));
    EXPECT_LT(dev, 1e-12);
    EXPECT_EQ(run("verify --pinv --n 12").code, 0);
    const auto u = run("verify --uniformity --m 6 --t 3");
    EXPECT_EQ(u.code, 0);
    EXPECT_EQ(u.out.rfind("PASS uniformity m=6 t=3", 0), 0u);
    EXPECT_EQ(run("verify --theorem1 --n 4").code, 0);
    const auto all = run("verify --all");
    EXPECT_EQ(all.code, 0);
    EXPECT_EQ(all.out.find("FAIL"), std::string::npos);
}
