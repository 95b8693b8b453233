#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "rtpol/error.hpp"

using namespace rtpol;
using namespace rtpol::app;
using test::TempDir;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RTPOL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Context context_for(const RunConfig& cfg) {
    Context ctx;
    ctx.config = cfg;
    return ctx;
}

RunConfig small_corpus(const std::string& dir, std::size_t seeds, std::size_t subs, std::vector<std::size_t> polarized) {
    synth::CorpusOptions opts;
    opts.seeds = seeds;
    opts.subs_per_seed = subs;
    opts.polarized_per_seed = std::move(polarized);
    opts.min_tweets = 2000;
    opts.max_tweets = 3000;
    opts.rng_seed = 5;
    cmd_synth(dir, opts, RunConfig{});
    return load_config(dir + "/config.json");
}

std::map<std::string, bool> planted_labels(const std::string& dir) {
    const CsvTable t = read_csv(dir + "/planted.csv");
    std::map<std::string, bool> out;
    for (const auto& r : t.rows) out[r[t.column("topic_id")]] = r[t.column("polarized")] == "1";
    return out;
}

} // namespace

TEST_CASE("config: defaults round-trip losslessly") {
    const RunConfig def;
    CHECK(config_from_json(to_json(def)) == def);
    CHECK(def.subkeywords == 10);
    CHECK(def.window_hours == 12.0);
    CHECK(def.polarization.samples == 50);
    CHECK(def.polarization.threshold == 0.04);
    CHECK(def.polarization.rewire.swap_factor == 10.0);
    CHECK(def.polarization.partition.max_imbalance == 0.7);
    CHECK(def.polarization.partition.restarts == 4);
    CHECK(def.m == 100);
    CHECK(def.trials == 10);
    CHECK(def.k_values == std::vector<std::size_t>{10, 20, 40, 80, 160, 320});
    CHECK(def.forest.trees == 200);
    CHECK(def.folds == 10);
    CHECK(def.seed_articles == 100);
}

TEST_CASE("config: customized values round-trip and hash stably") {
    RunConfig c;
    c.dump_path = "/data/dump.jsonl";
    c.schema.author_id = "user.id";
    c.seeds = {{"typhoon", Genre::WeatherDisaster, 1700000000000}, {"vote", Genre::Politics, 5}};
    c.viability = {20, 30};
    c.polarization.samples = 7;
    c.polarization.rewire.model = NullModel::JointDegree;
    c.k_values = {5, 50};
    c.forest.max_depth = 4;
    c.feature_naive_phi_hat = true;
    c.seed = 123456789012345ULL;
    c.window_hours = 6.5;
    const RunConfig back = config_from_json(to_json(c));
    CHECK(back == c);
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    CHECK(config_hash(c) != config_hash(RunConfig{}));
}

TEST_CASE("config: rejects unknown keys, wrong types and bad ranges") {
    CHECK_THROWS_AS(config_from_json(R"({"bogus": 1})"), ArgumentError);
    CHECK_THROWS_AS(config_from_json(R"({"seed": "abc"})"), ArgumentError);
    CHECK_THROWS_AS(config_from_json(R"({"polarization": {"threshold": "x"}})"), ArgumentError);
    CHECK_THROWS_AS(config_from_json(R"({"sampling": {"m": 0}})"), ArgumentError);
    CHECK_THROWS_AS(config_from_json("{not json"), ArgumentError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
    CHECK(config_from_json(R"({"seed": 9})").seed == 9);
}

TEST_CASE("cli exit codes") {
    TempDir dir;
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("--config /nonexistent/config.json ingest") == 2);

    RunConfig bad_path;
    bad_path.dump_path = dir.file("missing.jsonl");
    bad_path.output_dir = dir.file("out");
    test::write_file(dir.file("bad.json"), to_json(bad_path));
    CHECK(run_cli("--config " + dir.file("bad.json") + " ingest") == 2);

    test::write_file(dir.file("empty.jsonl"), "");
    RunConfig empty = bad_path;
    empty.dump_path = dir.file("empty.jsonl");
    empty.seeds = {{"typhoon", Genre::WeatherDisaster, 0}};
    test::write_file(dir.file("empty.json"), to_json(empty));
    CHECK(run_cli("--config " + dir.file("empty.json") + " ingest") == 0);
    CHECK(read_manifest(empty.topics_dir()).empty());

    test::write_file(dir.file("garbage.jsonl"), "nope\nstill nope\n");
    RunConfig garbage = empty;
    garbage.dump_path = dir.file("garbage.jsonl");
    test::write_file(dir.file("garbage.json"), to_json(garbage));
    CHECK(run_cli("--config " + dir.file("garbage.json") + " ingest") == 2);
}

TEST_CASE("cmd_ingest and cmd_score on a fixture dump") {
    TempDir dir;
    const RunConfig cfg = small_corpus(dir.path().string(), 1, 2, {1});
    const auto planted = planted_labels(dir.path().string());
    const IngestSummary ing = cmd_ingest(context_for(cfg));
    REQUIRE(ing.topics.size() == 2);
    for (const TopicEntry& t : ing.topics) CHECK(planted.count(t.topic_id) == 1);
    CHECK(read_manifest(cfg.topics_dir()).size() == 2);

    const auto rows = cmd_score(context_for(cfg));
    CHECK(rows.size() == 2);
    const auto back = read_results(output_path(cfg, "results.csv"));
    REQUIRE(back.size() == 2);
    for (const auto& r : back) CHECK(r.is_polarized == planted.at(r.topic_id));
    const CsvTable hist = read_csv(output_path(cfg, "histogram.csv"));
    CHECK(hist.comments.front().rfind("config_hash=", 0) == 0);
    CHECK(hist.rows.size() == 200);
}

TEST_CASE("cmd_score: non-viable topics give an empty table and a warning") {
    TempDir dir;
    RunConfig cfg = small_corpus(dir.path().string(), 1, 2, {1});
    cfg.viability = {1000000, 1000000};
    std::ostringstream log;
    Context ctx = context_for(cfg);
    ctx.log = &log;
    cmd_ingest(ctx);
    CHECK(cmd_score(ctx).empty());
    CHECK(log.str().find("warning") != std::string::npos);
    CHECK(read_results(output_path(cfg, "results.csv")).empty());
}

TEST_CASE("cmd_score: 20 planted-polarized and 20 unpolarized topics") {
    TempDir dir;
    const RunConfig cfg = small_corpus(dir.path().string(), 4, 10, {5, 5, 5, 5});
    const auto planted = planted_labels(dir.path().string());
    Context ctx = context_for(cfg);
    ctx.jobs = 2;
    cmd_ingest(ctx);
    cmd_score(ctx);
    const auto rows = read_results(output_path(cfg, "results.csv"));
    REQUIRE(rows.size() == 40);
    std::size_t polarized = 0, agree = 0;
    for (const auto& r : rows) {
        polarized += r.is_polarized ? 1 : 0;
        agree += r.is_polarized == planted.at(r.topic_id) ? 1 : 0;
    }
    CHECK(polarized == 20);
    CHECK(agree == 40);
}

TEST_CASE("cmd_characterize and evaluate: deterministic tables") {
    TempDir dir;
    RunConfig cfg = small_corpus(dir.path().string(), 2, 3, {2, 1});
    cfg.polarization.samples = 10;
    cfg.k_values = {5, 20};
    cfg.trials = 2;
    Context ctx = context_for(cfg);
    cmd_ingest(ctx);
    cmd_score(ctx);
    const auto features = cmd_characterize(ctx);
    CHECK(features.size() == 6);
    const std::string first = test::read_file(output_path(cfg, "features.csv"));
    const std::string ratio = test::read_file(output_path(cfg, "genre_ratio.csv"));
    cmd_characterize(ctx);
    CHECK(test::read_file(output_path(cfg, "features.csv")) == first);
    CHECK(test::read_file(output_path(cfg, "genre_ratio.csv")) == ratio);

    const CsvTable genres = read_csv(output_path(cfg, "genre_ratio.csv"));
    CHECK(genres.rows.size() == 2); // only genres that have topics

    const Evaluation oracle = cmd_evaluate(ctx, EvalMode::Oracle);
    for (const auto& s : oracle.per_k) {
        CHECK(s.precision == std::optional<double>(1.0));
        CHECK(s.recall == std::optional<double>(1.0));
    }
    const CsvTable precision = read_csv(output_path(cfg, "eval_oracle_precision.csv"));
    CHECK(precision.header.size() == 13);
    CHECK(precision.rows.size() == 2);
    for (const auto& row : precision.rows) {
        for (std::size_t c = 1; c < row.size(); ++c) CHECK((row[c].empty() || row[c] == "1"));
    }

    cmd_evaluate(ctx, EvalMode::Naive);
    const std::string naive = test::read_file(output_path(cfg, "eval_naive_summary.csv"));
    ctx.jobs = 3;
    cmd_evaluate(ctx, EvalMode::Naive);
    CHECK(test::read_file(output_path(cfg, "eval_naive_summary.csv")) == naive);
}

TEST_CASE("cmd_train and cmd_predict round-trip through files") {
    TempDir dir;
    RunConfig cfg;
    cfg.output_dir = dir.file("out");
    cfg.forest.trees = 20;
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<FeatureRow> rows;
    Rng rng(4);
    for (int i = 0; i < 40; ++i) {
        FeatureRow r;
        r.topic_id = "t" + std::to_string(i);
        r.features.genre = kAllGenres[rng.index(kGenreCount)];
        r.features.network_size = 50 + rng.index(200);
        r.features.url_ratio = rng.uniform();
        r.features.hashtag_ratio = rng.uniform();
        r.features.vocal_minority_index = rng.uniform(0.05, 1.0);
        r.phi_hat = r.features.url_ratio > 0.5 ? 0.3 : 0.0;
        r.is_polarized = *r.phi_hat > 0.04;
        rows.push_back(r);
    }
    {
        std::ofstream out(dir.file("features.csv"));
        write_features_csv(out, rows);
    }
    const Context ctx = context_for(cfg);
    const ForestModel m = cmd_train(ctx, dir.file("features.csv"), dir.file("model.json"));
    CHECK(m.trees.size() == 20);
    const auto pred = cmd_predict(ctx, dir.file("features.csv"), dir.file("model.json"), dir.file("pred.csv"));
    REQUIRE(pred.size() == 40);
    const CsvTable t = read_csv(dir.file("pred.csv"));
    CHECK(t.rows.size() == 40);
    CHECK(t.header == std::vector<std::string>{"topic_id", "phi_hat_pred", "is_polarized"});
    CHECK(parse_double(t.rows[0][1], "pred") == pred[0]);
}
