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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qftgi/io.hpp"

using namespace qftgi;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitInternal = 4;

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size())
            throw InvalidArgument(std::string(what) + ": cannot parse '" + text + "' as a comma-separated integer list");
        out.push_back(v);
    }
    if (out.empty() || text.back() == ',')
        throw InvalidArgument(std::string(what) + ": cannot parse '" + text + "' as a comma-separated integer list");
    return out;
}

double parse_double(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size())
        throw InvalidArgument(std::string(what) + ": cannot parse '" + text + "' as a number");
    return v;
}

/// "0.8:1,1,1;0.2:1,2,3", one photon per mode.
PartitionMixture parse_inline_mixture(const std::string& text) {
    std::vector<PartitionMixture::Component> comps;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, ';')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw InvalidArgument("--mixture: component '" + part + "' is not weight:labels");
        comps.push_back({parse_double(part.substr(0, colon), "--mixture weight"),
                         PartitionState::one_per_mode(parse_int_list(part.substr(colon + 1), "--mixture labels"))});
    }
    if (comps.empty()) throw InvalidArgument("--mixture: no components");
    return PartitionMixture(std::move(comps));
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument(std::string(what) + ": cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string(what) + ": " + e.what());
    }
}

/// A mixture file holds either the JSON mixture object or the inline syntax.
PartitionMixture read_mixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("--mixture-file: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return partition_mixture_from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw InvalidArgument(std::string("--mixture-file: ") + e.what());
        }
    }
    std::erase_if(text, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    return parse_inline_mixture(text);
}

/// c1 indistinguishable plus (1 - c1) fully distinguishable, n photons.
PartitionMixture synthetic_mixture(int n, double c1) {
    if (n < 2) throw InvalidArgument("--n must be >= 2");
    if (!(c1 >= 0.0 && c1 <= 1.0)) throw InvalidArgument("--c1 must lie in [0, 1]");
    std::vector<int> same(static_cast<std::size_t>(n), 1), diff(static_cast<std::size_t>(n));
    std::iota(diff.begin(), diff.end(), 1);
    std::vector<PartitionMixture::Component> comps;
    if (c1 > 0.0) comps.push_back({c1, PartitionState::one_per_mode(same)});
    if (c1 < 1.0) comps.push_back({1.0 - c1, PartitionState::one_per_mode(diff)});
    return PartitionMixture(std::move(comps));
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("--out: cannot write '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- prob -----------------------------------------------------------------

struct ProbArgs {
    std::string unitary = "qft";
    std::string unitary_file;
    int n = 0;
    std::string input, registers, output;
    bool q_marginals = false, distribution = false, analytic = false, dump_unitary = false;
    std::string format = "csv";
    std::string out;
    unsigned threads = default_threads();
};

UnitaryMatrix make_unitary(const ProbArgs& a, int modes) {
    if (!a.unitary_file.empty())
        return UnitaryMatrix(complex_matrix_from_json(read_json_file(a.unitary_file, "--unitary-file")));
    if (a.unitary == "qft") return qft_matrix(modes);
    if (a.unitary == "identity") return UnitaryMatrix::identity(modes);
    throw InvalidArgument("--unitary must be qft or identity");
}

int cmd_prob(const ProbArgs& a) {
    std::vector<int> occ = a.input.empty() ? std::vector<int>{} : parse_int_list(a.input, "--input");
    std::vector<int> regs = a.registers.empty() ? std::vector<int>{} : parse_int_list(a.registers, "--registers");
    int modes = a.n;
    if (modes == 0) modes = !occ.empty() ? static_cast<int>(occ.size()) : static_cast<int>(regs.size());
    if (modes < 1) throw InvalidArgument("prob: give --n, --input or --registers");
    if (occ.empty()) occ.assign(static_cast<std::size_t>(modes), 1);
    if (static_cast<int>(occ.size()) != modes) throw InvalidArgument("--input length must equal --n");
    const FockState in(occ);
    if (regs.empty()) regs.assign(static_cast<std::size_t>(in.photons()), 1);
    const PartitionState state(in, regs);
    const auto u = make_unitary(a, modes);
    if (u.modes() != modes) throw InvalidArgument("--unitary-file: matrix size must equal the mode count");

    json j;
    std::string csv;
    if (a.dump_unitary) j["unitary"] = to_json(u.matrix());
    if (!a.output.empty()) {
        const FockState out(parse_int_list(a.output, "--output"));
        const double p = p_partition(u, state, out);
        j["output"] = out.occupations();
        j["probability"] = p;
        csv += format_double(p) + "\n";
        std::cerr << "P(" << join(out.occupations()) << ") = " << format_double(p) << "\n";
    }
    if (a.distribution) {
        const auto d = output_distribution(u, state, a.threads);
        j["distribution"] = to_json(d);
        csv += to_csv(d);
        std::cerr << d.entries.size() << " outputs, total probability " << format_double(d.total()) << "\n";
    }
    if (a.q_marginals) {
        if (a.unitary != "qft" || !a.unitary_file.empty())
            throw InvalidArgument("--q-marginals requires --unitary qft");
        const auto q = a.analytic ? q_marginals_analytic(state) : q_marginals_bruteforce(u, state, a.threads);
        j["q_marginals"] = to_json(q);
        csv += to_csv(q);
        std::cerr << "P(Q != 0) = " << format_double(q.nonzero()) << "\n";
    }
    if (a.output.empty() && !a.distribution && !a.q_marginals && !a.dump_unitary)
        throw InvalidArgument("prob: nothing to compute; pass --output, --distribution or --q-marginals");
    if (a.format == "json") {
        emit(dump(j), a.out);
    } else {
        if (a.dump_unitary && csv.empty()) throw InvalidArgument("--dump-unitary requires --format json");
        emit(csv, a.out);
    }
    return 0;
}

// --- estimate -------------------------------------------------------------

struct EstimateArgs {
    std::string config;
    std::string protocol = "qft";
    int n = 0;
    std::string mixture, mixture_file;
    std::optional<double> c1;
    std::optional<std::uint64_t> shots;
    std::optional<double> epsilon, delta;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    bool ppnr = false, dump_marginals = false, timing = false;
    int phases = 21;
    std::string ci_scale = "single";
    std::string format = "json";
    unsigned threads = default_threads();
};

/// Config keys mirror the long flag names (with underscores); flags given on
/// the command line win.
void apply_config(EstimateArgs& a, const CLI::App& sub) {
    const auto j = read_json_file(a.config, "--config");
    if (!j.is_object()) throw InvalidArgument("--config: expected a JSON object");
    auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "protocol") { if (!given("--protocol")) a.protocol = v.get<std::string>(); }
            else if (key == "n") { if (!given("--n")) a.n = v.get<int>(); }
            else if (key == "mixture") {
                if (!given("--mixture") && !given("--mixture-file") && !given("--c1"))
                    a.mixture = v.is_string() ? v.get<std::string>() : v.dump();
            }
            else if (key == "mixture_file") { if (!given("--mixture-file") && !given("--mixture") && !given("--c1")) a.mixture_file = v.get<std::string>(); }
            else if (key == "c1") { if (!given("--c1") && !given("--mixture") && !given("--mixture-file")) a.c1 = v.get<double>(); }
            else if (key == "shots") { if (!given("--shots") && !given("--epsilon") && !given("--delta")) a.shots = v.get<std::uint64_t>(); }
            else if (key == "epsilon") { if (!given("--epsilon") && !given("--shots")) a.epsilon = v.get<double>(); }
            else if (key == "delta") { if (!given("--delta") && !given("--shots")) a.delta = v.get<double>(); }
            else if (key == "seed") { if (!given("--seed")) a.seed = v.get<std::uint64_t>(); }
            else if (key == "output") { if (!given("--out")) a.out = v.get<std::string>(); }
            else if (key == "ppnr") { if (!given("--ppnr")) a.ppnr = v.get<bool>(); }
            else if (key == "dump_marginals") { if (!given("--dump-marginals")) a.dump_marginals = v.get<bool>(); }
            else if (key == "phases") { if (!given("--phases")) a.phases = v.get<int>(); }
            else if (key == "ci_scale") { if (!given("--ci-scale")) a.ci_scale = v.get<std::string>(); }
            else if (key == "threads") { if (!given("--threads")) a.threads = v.get<unsigned>(); }
            else throw InvalidArgument("--config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("--config: ") + e.what());
    }
}

PartitionMixture resolve_mixture(const EstimateArgs& a) {
    const int sources = !a.mixture.empty() + !a.mixture_file.empty() + a.c1.has_value();
    if (sources != 1) throw InvalidArgument("estimate: give exactly one of --mixture, --mixture-file, --c1");
    if (!a.mixture_file.empty()) return read_mixture_file(a.mixture_file);
    if (a.c1) return synthetic_mixture(a.n, *a.c1);
    const auto first = a.mixture.find_first_not_of(" \t");
    if (first != std::string::npos && a.mixture[first] == '{') {
        try {
            return partition_mixture_from_json(json::parse(a.mixture));
        } catch (const json::exception& e) {
            throw InvalidArgument(std::string("--mixture: ") + e.what());
        }
    }
    return parse_inline_mixture(a.mixture);
}

CiScale parse_ci_scale(const std::string& s) {
    if (s == "single") return CiScale::single_output;
    if (s == "combined") return CiScale::combined_outputs;
    throw InvalidArgument("--ci-scale must be single or combined");
}

int cmd_estimate(EstimateArgs a, const CLI::App& sub) {
    if (!a.config.empty()) apply_config(a, sub);
    if (a.shots && (a.epsilon || a.delta))
        throw InvalidArgument("estimate: --shots and --epsilon/--delta are mutually exclusive");
    if (a.shots && *a.shots == 0) throw InvalidArgument("--shots must be positive");
    const double eps = a.epsilon.value_or(0.05), delta = a.delta.value_or(0.005);
    if (a.protocol != "qft" && a.protocol != "ci") throw InvalidArgument("--protocol must be qft or ci");
    if (a.format != "json" && a.format != "csv") throw InvalidArgument("--format must be json or csv");

    const auto mixture = resolve_mixture(a);
    const int n = mixture.photons();
    if (a.n != 0 && a.n != n) throw InvalidArgument("estimate: --n disagrees with the mixture size");

    ExperimentResult res;
    json extra;
    if (a.protocol == "qft") {
        const std::uint64_t shots = a.shots ? *a.shots : shots_required_qft(eps, delta, n);
        res = run_qft_experiment(mixture, shots, a.seed, {a.threads, a.ppnr});
    } else {
        if (a.ppnr) throw InvalidArgument("--ppnr applies to the qft protocol only");
        const auto scale = parse_ci_scale(a.ci_scale);
        const auto phases = uniform_phases(a.phases);
        std::uint64_t per_phase = 0;
        if (a.shots) {
            per_phase = *a.shots;
        } else {
            const double total = shots_required_ci(eps, delta, n, scale);
            per_phase = static_cast<std::uint64_t>(std::ceil(total / a.phases));
        }
        res = run_ci_experiment(n, mixture.indistinguishable_weight(), phases, per_phase, a.seed, scale);
        extra["shots_per_phase"] = per_phase;
    }

    json j = to_json(res, a.timing);
    j["protocol"] = a.protocol;
    j["n"] = n;
    j["seed"] = a.seed;
    j["mixture"] = to_json(mixture);
    for (auto& [k, v] : extra.items()) j[k] = v;
    if (a.dump_marginals) {
        QMarginalDistribution exact{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
        for (const auto& c : mixture.components()) {
            const auto q = q_marginals_analytic(c.state);
            for (int k = 0; k < n; ++k) exact.probabilities[k] += c.weight * q[k];
        }
        j["exact_marginals"] = exact.probabilities;
    }

    const auto& e = res.estimate;
    std::cerr << a.protocol << " n=" << n << " shots=" << e.shots << " c1=" << format_double(e.c1)
              << " stderr=" << format_double(e.std_error) << " method=" << to_string(e.method) << "\n";
    if (a.format == "json") {
        emit(dump(j), a.out);
    } else {
        std::string csv = "c1,stderr,shots,method,pre_clip\n" + format_double(e.c1) + "," +
                          format_double(e.std_error) + "," + std::to_string(e.shots) + "," +
                          std::string(to_string(e.method)) + "," + format_double(e.pre_clip) + "\n";
        emit(csv, a.out);
    }
    return 0;
}

// --- compare --------------------------------------------------------------

struct CompareArgs {
    int n_min = 2, n_max = 30;
    std::string n_range;
    double epsilon = 0.05, delta = 0.005;
    std::string ci_scale = "combined";
    std::string format = "csv";
    std::string out;
};

int cmd_compare(CompareArgs a) {
    if (!a.n_range.empty()) {
        const auto dots = a.n_range.find("..");
        if (dots == std::string::npos) throw InvalidArgument("--n-range must look like 2..30");
        a.n_min = static_cast<int>(parse_double(a.n_range.substr(0, dots), "--n-range"));
        a.n_max = static_cast<int>(parse_double(a.n_range.substr(dots + 2), "--n-range"));
    }
    if (a.n_min > a.n_max) throw InvalidArgument("compare: empty range n-min > n-max");
    std::vector<int> ns;
    for (int n = a.n_min; n <= a.n_max; ++n) ns.push_back(n);
    if (a.n_max > kMaxCiPhotons)
        throw GuardError("compare: n = " + std::to_string(a.n_max) + " exceeds the CI shot-count limit " +
                         std::to_string(kMaxCiPhotons) + " (4^n overflows exact double integers)");
    const auto rows = compare_protocols(ns, a.epsilon, a.delta, parse_ci_scale(a.ci_scale));
    if (a.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n}, {"prime", r.prime}, {"qft_shots", r.qft_shots},
                           {"ci_shots", r.ci_shots}, {"ratio", r.ratio}});
        emit(dump(json{{"epsilon", a.epsilon}, {"delta", a.delta}, {"rows", arr}}), a.out);
    } else if (a.format == "csv") {
        emit(to_csv(rows), a.out);
    } else {
        throw InvalidArgument("--format must be json or csv");
    }
    std::cerr << rows.size() << " rows, n = " << a.n_min << ".." << a.n_max << "\n";
    return 0;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
    bool ztl = false, pinv = false, uniformity = false, theorem1 = false, all = false;
    int n = 0, m = 0, t = 0;
    unsigned threads = default_threads();
};

struct Check {
    std::string name;
    double max_deviation;
    double tolerance;
    bool passed() const { return max_deviation < tolerance; }
};

Check check_ztl(int n, unsigned threads) {
    const auto d = output_distribution(qft_matrix(n), periodic_partition_state(n, 1), threads);
    double worst = 0.0;
    for (const auto& [s, p] : d.entries)
        if (q_value(s) % n != 0) worst = std::max(worst, std::abs(p));
    return {"ztl n=" + std::to_string(n), worst, 1e-12};
}

Check check_pinv(int n) {
    const double dev = (pseudo_inverse_analytic(n) - pseudo_inverse_numeric(build_a_matrix(n))).cwiseAbs().maxCoeff();
    return {"pinv n=" + std::to_string(n), dev, 1e-10};
}

Check check_uniformity(int m, int t) {
    if (m < 2 || t < 1 || m % t != 0 || t == m)
        throw InvalidArgument("--uniformity needs m >= 2 and a proper divisor t of m");
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    for (int j = 0; j < m; j += t) occ[static_cast<std::size_t>(j)] = 1;
    const auto rep = verify_pztl_uniformity(m, FockState(occ));
    const double dev = std::max(rep.max_suppressed, rep.coprime ? rep.max_uniform_deviation : 0.0);
    return {"uniformity m=" + std::to_string(m) + " t=" + std::to_string(t), dev, 1e-12};
}

Check check_theorem1(int n, unsigned threads) {
    const auto u = qft_matrix(n);
    double worst = 0.0;
    for (const auto& s : enumerate_partition_states(n)) {
        const auto a = q_marginals_analytic(s);
        const auto b = q_marginals_bruteforce(u, s, threads);
        for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return {"theorem1 n=" + std::to_string(n), worst, 1e-9};
}

int cmd_verify(const VerifyArgs& a) {
    std::vector<Check> checks;
    const bool any = a.ztl || a.pinv || a.uniformity || a.theorem1;
    if (!any && !a.all) throw InvalidArgument("verify: pick --ztl, --pinv, --uniformity, --theorem1 or --all");
    auto need_n = [&](const char* what) {
        if (a.n < 2) throw InvalidArgument(std::string(what) + " requires --n >= 2");
        return a.n;
    };
    if (a.ztl) checks.push_back(check_ztl(need_n("--ztl"), a.threads));
    if (a.pinv) checks.push_back(check_pinv(need_n("--pinv")));
    if (a.theorem1) checks.push_back(check_theorem1(need_n("--theorem1"), a.threads));
    if (a.uniformity) checks.push_back(check_uniformity(a.m, a.t));
    if (a.all) {
        for (int n = 2; n <= 7; ++n) checks.push_back(check_ztl(n, a.threads));
        for (int n = 2; n <= 24; ++n) checks.push_back(check_pinv(n));
        for (int n = 2; n <= 5; ++n) checks.push_back(check_theorem1(n, a.threads));
        checks.push_back(check_uniformity(4, 2));
        checks.push_back(check_uniformity(6, 2));
        checks.push_back(check_uniformity(6, 3));
        checks.push_back(check_uniformity(8, 4));
    }
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << " max_deviation=" << format_double(c.max_deviation)
                  << " tolerance=" << c.tolerance << "\n";
        failed += !c.passed();
    }
    std::cerr << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
    return failed ? kExitVerifyFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qftgi: QFT interferometer statistics and genuine-indistinguishability estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qftgi 1.0.0");

    ProbArgs pa;
    auto* prob = app.add_subcommand("prob", "Exact transition probabilities, distributions and Q-marginals");
    prob->add_option("--unitary", pa.unitary, "qft | identity")->check(CLI::IsMember({"qft", "identity"}));
    prob->add_option("--unitary-file", pa.unitary_file, "JSON matrix of [re, im] pairs");
    prob->add_option("--n", pa.n, "Mode count")->check(CLI::PositiveNumber);
    prob->add_option("--input", pa.input, "Input occupations, e.g. 1,0,0,1 (default one photon per mode)");
    prob->add_option("--registers", pa.registers, "Register label per photon, e.g. 1,1,2");
    prob->add_option("--output", pa.output, "Output occupations for a single transition probability");
    prob->add_flag("--q-marginals", pa.q_marginals, "Print P(Q = k)");
    prob->add_flag("--distribution", pa.distribution, "Print the full output distribution");
    prob->add_flag("--analytic", pa.analytic, "Use the closed form for Q-marginals");
    prob->add_flag("--dump-unitary", pa.dump_unitary, "Include the unitary in JSON output");
    prob->add_option("--format", pa.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    prob->add_option("--out", pa.out, "Output file (default stdout)");
    prob->add_option("--threads", pa.threads, "Worker threads")->check(CLI::PositiveNumber);

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Simulate a GI measurement and estimate c1");
    est->add_option("--config", ea.config, "JSON experiment config");
    est->add_option("--protocol", ea.protocol, "qft | ci");
    est->add_option("--n", ea.n, "Photon number (required with --c1)");
    est->add_option("--mixture", ea.mixture, "Inline mixture, e.g. \"0.8:1,1,1;0.2:1,2,3\"");
    est->add_option("--mixture-file", ea.mixture_file, "Mixture file (JSON or inline syntax)");
    est->add_option("--c1", ea.c1, "Synthetic mixture: c1 indistinguishable, rest fully distinguishable");
    est->add_option("--shots", ea.shots, "Shot count (QFT) or shots per phase (CI)");
    est->add_option("--epsilon", ea.epsilon, "Target accuracy (default 0.05)");
    est->add_option("--delta", ea.delta, "Failure probability (default 0.005)");
    est->add_option("--seed", ea.seed, "RNG seed")->capture_default_str();
    est->add_option("--out,--output", ea.out, "Output file (default stdout)");
    est->add_flag("--ppnr", ea.ppnr, "Simulate threshold detectors with PPNR post-correction");
    est->add_flag("--dump-marginals", ea.dump_marginals, "Include the exact mixture Q-marginals");
    est->add_flag("--timing", ea.timing, "Include wall time in the JSON result");
    est->add_option("--phases", ea.phases, "CI phase settings")->check(CLI::Range(3, 100000));
    est->add_option("--ci-scale", ea.ci_scale, "single | combined");
    est->add_option("--format", ea.format, "json | csv");
    est->add_option("--threads", ea.threads, "Worker threads")->check(CLI::PositiveNumber);

    CompareArgs ca;
    auto* cmp = app.add_subcommand("compare", "QFT vs CI shot requirements over a photon-number range");
    cmp->add_option("--n-min", ca.n_min, "Smallest n");
    cmp->add_option("--n-max", ca.n_max, "Largest n");
    cmp->add_option("--n-range", ca.n_range, "Range as lo..hi");
    cmp->add_option("--epsilon", ca.epsilon, "Target accuracy");
    cmp->add_option("--delta", ca.delta, "Failure probability");
    cmp->add_option("--ci-scale", ca.ci_scale, "combined | single");
    cmp->add_option("--format", ca.format, "csv | json");
    cmp->add_option("--out,--output", ca.out, "Output file (default stdout)");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Numerical verification suites");
    ver->add_flag("--ztl", va.ztl, "Zero-transmission law at n = m");
    ver->add_flag("--pinv", va.pinv, "Analytic vs numeric pseudo-inverse");
    ver->add_flag("--uniformity", va.uniformity, "Periodic-input suppression and 1/t uniformity");
    ver->add_flag("--theorem1", va.theorem1, "Closed-form vs brute-force Q-marginals over all partitions");
    ver->add_flag("--all", va.all, "Run every suite at default sizes");
    ver->add_option("--n", va.n, "Photon number");
    ver->add_option("--m", va.m, "Mode count (uniformity)");
    ver->add_option("--t", va.t, "Input period (uniformity)");
    ver->add_option("--threads", va.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*prob) return cmd_prob(pa);
        if (*est) return cmd_estimate(ea, *est);
        if (*cmp) return cmd_compare(ca);
        if (*ver) return cmd_verify(va);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
