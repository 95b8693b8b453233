// Acceptance run: one PASS/FAIL line per criterion; nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rtpol/error.hpp"
#include "rtpol/forest.hpp"
#include "rtpol/partition.hpp"
#include "rtpol/polarization.hpp"
#include "rtpol/random.hpp"
#include "rtpol/synthetic.hpp"

using namespace rtpol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<oracle::Pair> pairs_of(const RetweetNetwork& g) {
    std::vector<oracle::Pair> out;
    for (const Edge& e : g.edges()) out.emplace_back(e.source, e.target);
    return out;
}

Bisection random_bisection(const RetweetNetwork& g, Rng& rng) {
    std::vector<Block> a(g.node_count());
    for (;;) {
        std::size_t in_a = 0;
        for (auto& b : a) {
            b = rng.bernoulli(0.5) ? Block::A : Block::B;
            in_a += b == Block::A;
        }
        if (in_a > 0 && in_a < a.size()) break;
    }
    return make_bisection(g, std::move(a));
}

std::vector<int> sides(const Bisection& b) {
    std::vector<int> s;
    for (Block x : b.assignment) s.push_back(x == Block::A ? 0 : 1);
    return s;
}

// ---------------------------------------------------------------- E-I index

Outcome adaptive_ei_brute_force() {
    Stopwatch clock;
    std::size_t matched = 0, undefined = 0;
    double worst = 0.0;
    constexpr std::size_t kGraphs = 1000;
    for (std::uint64_t s = 0; s < kGraphs; ++s) {
        Rng rng(derive_seed(11, "ei", s));
        const std::size_t n = 2 + rng.index(11);
        const RetweetNetwork g = synth::random_directed(n, rng.uniform(0.0, 0.8), s);
        const Bisection b = random_bisection(g, rng);
        const double expect = oracle::brute_force_ei(n, pairs_of(g), sides(b));
        if (std::isnan(expect)) {
            try {
                adaptive_ei(g, b);
            } catch (const UndefinedScoreError&) {
                ++matched;
                ++undefined;
            }
            continue;
        }
        const double diff = std::abs(adaptive_ei(g, b) - expect);
        worst = std::max(worst, diff);
        matched += diff <= 1e-12;
    }
    const double t = clock.seconds();
    return {matched == kGraphs && t < 10.0,
            fmt("%zu/%zu graphs match (%zu undefined), max |diff| %.2e, %.2f s", matched, kGraphs, undefined, worst, t)};
}

Outcome equal_block_reduction() {
    std::size_t matched = 0;
    double worst = 0.0;
    constexpr std::size_t kGraphs = 100;
    for (std::uint64_t s = 0; s < kGraphs; ++s) {
        Rng rng(derive_seed(12, "equal", s));
        const std::size_t half = 2 + rng.index(30);
        const RetweetNetwork g = synth::random_directed(2 * half, rng.uniform(0.02, 0.6), derive_seed(12, "g", s));
        std::vector<Block> a(2 * half, Block::B);
        std::vector<std::size_t> order(2 * half);
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t i = 0; i < half; ++i) a[order[i]] = Block::A;
        const Bisection b = make_bisection(g, a);
        double internal = 0, external = 0;
        for (const Edge& e : g.edges()) (a[e.source] == a[e.target] ? internal : external) += 1;
        const double expect = oracle::classic_ei_equal_blocks(half, internal, external);
        const double diff = std::abs(adaptive_ei(g, b) - expect);
        worst = std::max(worst, diff);
        matched += diff <= 1e-12;
    }
    return {matched == kGraphs, fmt("%zu/%zu equal-block graphs match, max |diff| %.2e", matched, kGraphs, worst)};
}

// ---------------------------------------------------------------- null model

Outcome null_model_exactness() {
    std::size_t samples = 0, exact = 0, accepted_any = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(derive_seed(13, "null", s));
        RetweetNetwork g;
        switch (s % 3) {
        case 0: g = synth::random_directed(10 + rng.index(150), rng.uniform(0.01, 0.3), s); break;
        case 1: g = synth::planted_pair(5 + rng.index(40), rng.uniform(0.2, 0.9), rng.index(20), s); break;
        default: g = synth::erdos_renyi(50 + rng.index(400), 200 + rng.index(1500), s); break;
        }
        const auto out0 = out_degrees(g), in0 = in_degrees(g);
        for (NullModel model : {NullModel::DegreeSequence, NullModel::JointDegree}) {
            for (std::uint64_t r = 0; r < 5; ++r) {
                const NullSample ns = rewire_null(g, derive_seed(s, "sample", r), {10.0, model});
                ++samples;
                accepted_any += ns.accepted > 0;
                std::set<std::pair<NodeIndex, NodeIndex>> seen;
                bool simple = true;
                for (const Edge& e : ns.network.edges()) {
                    simple = simple && e.source != e.target && seen.emplace(e.source, e.target).second;
                }
                exact += simple && ns.network.node_count() == g.node_count() &&
                         ns.network.edge_count() == g.edge_count() && out_degrees(ns.network) == out0 &&
                         in_degrees(ns.network) == in0;
            }
        }
    }
    return {exact == samples && accepted_any > 0,
            fmt("%zu/%zu samples preserve degrees, |V| and |E| (%zu with accepted swaps)", exact, samples, accepted_any)};
}

// ---------------------------------------------------------------- normalization

Outcome normalization_er(unsigned jobs) {
    Stopwatch clock;
    std::size_t within = 0;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const RetweetNetwork g = synth::erdos_renyi(500, 2000, derive_seed(14, "er", s));
        const PolarizationResult r = normalized_score(g, derive_seed(14, "score", s), {}, jobs);
        within += std::abs(r.phi_hat) <= 0.04;
        worst = std::max(worst, std::abs(r.phi_hat));
    }
    const double t = clock.seconds();
    return {within >= 90 && t < 300.0,
            fmt("%zu/100 runs with |phi_hat| <= 0.04 (max %.4f), %.1f s", within, worst, t)};
}

Outcome star_deflation(unsigned jobs) {
    std::size_t below = 0;
    double worst = -1.0;
    const RetweetNetwork g = synth::star(200);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PolarizationResult r = normalized_score(g, derive_seed(15, "star", s), {}, jobs);
        below += r.phi_hat < 0.04;
        worst = std::max(worst, r.phi_hat);
    }
    return {below == 100, fmt("%zu/100 runs with phi_hat < 0.04 (max %.4f)", below, worst)};
}

// ---------------------------------------------------------------- partitioner

Outcome partitioner() {
    std::size_t recovered = 0;
    std::size_t passes = 0, bad_passes = 0;
    auto check_trace = [&](const PartitionTrace& tr) {
        for (const RefinementPass& p : tr.passes) {
            ++passes;
            bad_passes += p.cut_after > p.cut_before;
        }
    };
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(derive_seed(16, "pair", s));
        const std::size_t group = 10 + rng.index(41);
        const RetweetNetwork g = synth::planted_pair(group, 1.0, 1 + rng.index(group / 2), derive_seed(16, "g", s));
        PartitionTrace tr;
        const Bisection b = bisect(g, derive_seed(16, "bisect", s), {}, &tr);
        check_trace(tr);
        bool ok = true;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            const bool first = std::stoul(g.node_id(static_cast<NodeIndex>(i))) < group;
            ok = ok && ((b.assignment[i] == b.assignment[0]) == (first == (std::stoul(g.node_id(0)) < group)));
        }
        recovered += ok;
    }
    std::size_t balanced = 0;
    double worst_excess = -1.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Rng rng(derive_seed(16, "random", s));
        const std::size_t n = 2 + rng.index(400);
        const RetweetNetwork g = synth::random_directed(n, rng.uniform(0.0, 8.0 / static_cast<double>(n)),
                                                        derive_seed(16, "rg", s));
        PartitionTrace tr;
        const Bisection b = bisect(g, s, {}, &tr);
        check_trace(tr);
        const double limit = 0.7 + 1.0 / static_cast<double>(n);
        balanced += b.balance <= limit;
        worst_excess = std::max(worst_excess, b.balance - limit);
    }
    return {recovered >= 95 && balanced == 1000 && bad_passes == 0,
            fmt("planted recovery %zu/100; balance within 0.7+1/|V| on %zu/1000 (worst margin %.4f); "
                "%zu/%zu FM passes increased the cut",
                recovered, balanced, -worst_excess, bad_passes, passes)};
}

// ---------------------------------------------------------------- forest

ForestConfig stump() {
    ForestConfig c;
    c.trees = 1;
    c.max_depth = 1;
    c.bootstrap = false;
    c.features_per_split = 1;
    c.min_samples_leaf = 1;
    c.min_rows = 1;
    return c;
}

Outcome forest_oracle() {
    std::size_t matched = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(derive_seed(17, "stump", s));
        const std::size_t n = 4 + rng.index(60);
        Matrix x;
        std::vector<double> xs, y;
        const bool coarse = s % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = coarse ? std::round(rng.uniform(0, 10)) : rng.uniform(-3, 3);
            x.push_back({v});
            xs.push_back(v);
            y.push_back(rng.uniform(-1, 1) + (v > 0.5 ? 0.7 : 0.0));
        }
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        const auto best = oracle::best_split_1d(xs, y);
        const RegressionTree t = grow_tree(x, y, rows, stump(), s);
        if (!best.found) {
            matched += t.nodes.size() == 1;
            continue;
        }
        matched += t.nodes.size() == 3 && t.nodes[0].threshold == best.threshold &&
                   std::abs(t.nodes[1].value - best.left_mean) <= 1e-12 &&
                   std::abs(t.nodes[2].value - best.right_mean) <= 1e-12;
    }

    double worst_shift = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        Rng rng(derive_seed(17, "shift", s));
        Matrix x;
        std::vector<double> y, shifted;
        const double c = rng.uniform(-10, 10);
        for (int i = 0; i < 120; ++i) {
            std::vector<double> row = {rng.uniform(), rng.uniform(), std::round(rng.uniform(0, 4))};
            y.push_back(row[0] * 0.4 + (row[1] > 0.5 ? 0.2 : 0.0) + 0.05 * rng.uniform());
            shifted.push_back(y.back() + c);
            x.push_back(std::move(row));
        }
        ForestConfig cfg;
        cfg.trees = 30;
        cfg.rng_seed = s;
        const ForestModel a = fit_forest(x, y, {"a", "b", "c"}, cfg);
        const ForestModel b = fit_forest(x, shifted, {"a", "b", "c"}, cfg);
        for (const auto& row : x) worst_shift = std::max(worst_shift, std::abs(b.predict(row) - a.predict(row) - c));
    }
    return {matched == 100 && worst_shift <= 1e-9,
            fmt("%zu/100 stumps match exhaustive search; max shift deviation %.2e", matched, worst_shift)};
}

// ---------------------------------------------------------------- pipeline

struct Pipeline {
    test::TempDir dir{"rtpol_accept"};
    app::RunConfig config;
    std::map<std::string, bool> planted;
    double seconds = 0.0;
    std::string error;
};

std::map<std::string, bool> planted_labels(const std::string& path) {
    const CsvTable t = read_csv(path);
    std::map<std::string, bool> out;
    for (const auto& r : t.rows) out[r[t.column("topic_id")]] = r[t.column("polarized")] == "1";
    return out;
}

// Default synthetic corpus through ingest and score; shared by two criteria.
Pipeline& scored_corpus(unsigned jobs) {
    static std::optional<Pipeline> p;
    if (p) return *p;
    p.emplace();
    try {
        app::cmd_synth(p->dir.path().string(), synth::CorpusOptions{}, app::RunConfig{});
        p->config = app::load_config(p->dir.file("config.json"));
        p->planted = planted_labels(p->dir.file("planted.csv"));
        Stopwatch clock;
        app::Context ctx;
        ctx.config = p->config;
        ctx.jobs = jobs;
        app::cmd_ingest(ctx);
        app::cmd_score(ctx);
        p->seconds = clock.seconds();
    } catch (const std::exception& e) {
        p->error = e.what();
    }
    return *p;
}

Outcome synthetic_end_to_end(unsigned jobs) {
    Pipeline& p = scored_corpus(jobs);
    if (!p.error.empty()) return {false, "pipeline failed: " + p.error};
    const auto rows = app::read_results(app::output_path(p.config, "results.csv"));
    std::size_t tp = 0, fp = 0, fn = 0;
    std::set<std::string> scored;
    for (const auto& r : rows) {
        scored.insert(r.topic_id);
        const auto it = p.planted.find(r.topic_id);
        const bool truth = it != p.planted.end() && it->second;
        tp += r.is_polarized && truth;
        fp += r.is_polarized && !truth;
        fn += !r.is_polarized && truth;
    }
    for (const auto& [id, polarized] : p.planted) fn += polarized && !scored.count(id);
    const double f = tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
    return {f >= 0.9 && p.seconds < 600.0,
            fmt("%zu/%zu topics scored; tp=%zu fp=%zu fn=%zu F=%.3f; ingest+score %.1f s", rows.size(), p.planted.size(),
                tp, fp, fn, f, p.seconds)};
}

Outcome low_resource(unsigned jobs) {
    Pipeline& p = scored_corpus(jobs);
    if (!p.error.empty()) return {false, "pipeline failed: " + p.error};
    app::Context ctx;
    ctx.config = p.config;
    ctx.config.k_values = {10, 20, 40};
    ctx.config.trials = 10;
    ctx.jobs = jobs;
    const Evaluation naive = app::cmd_evaluate(ctx, app::EvalMode::Naive);
    const Evaluation ml = app::cmd_evaluate(ctx, app::EvalMode::Ml);
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t k : ctx.config.k_values) {
        const KSummary& n = naive.summary(k);
        const KSummary& m = ml.summary(k);
        const bool gap = n.precision && n.recall && *n.precision - *n.recall > 0.0;
        pass = pass && gap;
        detail << "k=" << k << " naive P=" << fmt("%.3f", n.precision.value_or(NAN))
               << " R=" << fmt("%.3f", n.recall.value_or(NAN)) << " ml R=" << fmt("%.3f", m.recall.value_or(NAN));
        if (k <= 20) {
            const bool lift = n.recall && m.recall && *m.recall - *n.recall >= 0.15;
            pass = pass && lift;
        }
        detail << (k == 40 ? "" : "; ");
    }
    return {pass, detail.str()};
}

// ---------------------------------------------------------------- determinism

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RTPOL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = test::read_file(e.path().string());
    }
    return out;
}

Outcome determinism() {
    test::TempDir dir("rtpol_determinism");
    const std::string d = dir.path().string();
    if (run_cli("synth --dir " + d + " --seeds 3 --subs 4 --min-tweets 1500 --max-tweets 3000 --corpus-seed 21") != 0) {
        return {false, "synth failed"};
    }
    auto cfg = nlohmann::json::parse(test::read_file(dir.file("config.json")));
    cfg["sampling"]["k_values"] = {10, 40};
    cfg["sampling"]["trials"] = 4;
    cfg["forest"]["trees"] = 50;
    cfg["forest"]["folds"] = 4;
    cfg["seed"] = 77;
    test::write_file(dir.file("config.json"), cfg.dump(2));

    std::vector<std::map<std::string, std::string>> runs;
    for (const std::string name : {"run_a", "run_b"}) {
        const std::string base = "--quiet --config " + dir.file("config.json") + " --out " + dir.file(name);
        for (const std::string step : {"run", "evaluate --mode naive", "evaluate --mode ml"}) {
            if (const int code = run_cli(base + " " + step); code != 0) {
                return {false, name + ": '" + step + "' exited with " + std::to_string(code)};
            }
        }
        runs.push_back(tree_contents(dir.file(name)));
    }
    std::size_t tables = 0, differing = 0;
    std::string first_diff;
    for (const auto& [file, content] : runs[0]) {
        tables += file.size() > 4 && file.substr(file.size() - 4) == ".csv";
        const auto it = runs[1].find(file);
        if (it == runs[1].end() || it->second != content) {
            ++differing;
            if (first_diff.empty()) first_diff = file;
        }
    }
    const bool results_present = runs[0].count("results.csv") == 1;
    return {differing == 0 && runs[0].size() == runs[1].size() && results_present && tables > 0,
            fmt("%zu files (%zu tables) compared, %zu differ%s%s", runs[0].size(), tables, differing,
                first_diff.empty() ? "" : ", first: ", first_diff.c_str())};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Acceptance criteria"};
    std::string report_path, only;
    unsigned jobs = 1;
    cli.add_option("--report", report_path, "Also write the PASS/FAIL lines here");
    cli.add_option("--only", only, "Comma-separated criterion names");
    cli.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    CLI11_PARSE(cli, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"adaptive_ei_brute_force", adaptive_ei_brute_force},
        {"equal_block_reduction", equal_block_reduction},
        {"null_model_exactness", null_model_exactness},
        {"normalization_er", [&] { return normalization_er(jobs); }},
        {"star_deflation", [&] { return star_deflation(jobs); }},
        {"partitioner", partitioner},
        {"synthetic_end_to_end", [&] { return synthetic_end_to_end(jobs); }},
        {"low_resource", [&] { return low_resource(jobs); }},
        {"forest_oracle", forest_oracle},
        {"determinism", determinism},
    };
    std::set<std::string> selected;
    for (std::stringstream ss(only); ss.good();) {
        std::string name;
        std::getline(ss, name, ',');
        if (!name.empty()) selected.insert(name);
    }

    std::ofstream report;
    if (!report_path.empty()) report.open(report_path);
    bool all = true;
    for (const auto& [name, run] : criteria) {
        if (!selected.empty() && !selected.count(name)) continue;
        Outcome o;
        Stopwatch clock;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const std::string line = std::string(o.pass ? "PASS " : "FAIL ") + name + ": " + o.detail +
                                 fmt(" [%.1f s]", clock.seconds());
        std::cout << line << std::endl;
        if (report) report << line << '\n' << std::flush;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
