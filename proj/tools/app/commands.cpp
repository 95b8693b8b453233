#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "rtpol/csv.hpp"
#include "rtpol/error.hpp"
#include "rtpol/estimators.hpp"
#include "rtpol/parallel.hpp"
#include "rtpol/random.hpp"

namespace rtpol::app {

namespace fs = std::filesystem;

namespace {

class Table {
public:
    Table(const std::string& path, const RunConfig& config) : path_(path) {
        const fs::path parent = fs::path(path).parent_path();
        if (!parent.empty()) {
            std::error_code ec;
            fs::create_directories(parent, ec);
        }
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw IoError("cannot write " + path);
        out_ << "# config_hash=" << config_hash(config) << '\n';
    }
    ~Table() noexcept(false) {
        out_.flush();
        if (!out_ && std::uncaught_exceptions() == 0) throw IoError("write failed: " + path_);
    }
    void row(const std::vector<std::string>& cells) { write_csv_row(out_, cells); }
    std::ostream& stream() { return out_; }

private:
    std::string path_;
    std::ofstream out_;
};

void note(const Context& ctx, const std::string& msg) {
    if (ctx.log) *ctx.log << msg << '\n';
}

std::uint64_t topic_seed(const RunConfig& c, std::string_view stage, const std::string& topic_id) {
    return derive_seed(c.seed, stage, fnv1a64(topic_id));
}

std::string flag(bool b) { return b ? "1" : "0"; }

} // namespace

std::string output_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
}

IngestSummary cmd_ingest(const Context& ctx) {
    const RunConfig& c = ctx.config;
    if (c.dump_path.empty()) throw ArgumentError("config: input.dump is not set");
    ParseReport report = parse_dump(c.dump_path, c.schema);
    if (report.malformed > 0) note(ctx, "ingest: " + std::to_string(report.malformed) + " malformed line(s) skipped");
    const StopwordSet stopwords = c.stopwords_path.empty() ? default_stopwords() : load_stopwords(c.stopwords_path);
    const DelimiterTokenizer tokenizer;

    IngestSummary summary;
    summary.tweets = report.tweets.size();
    summary.malformed = report.malformed;
    std::vector<TopicDataset> topics;
    Table subs(output_path(c, "subkeywords.csv"), c);
    subs.row({"seed", "genre", "rank", "token", "frequency"});
    for (const SeedKeyword& seed : c.seeds) {
        const EpochMs start = seed.window_start, end = seed.window_start + c.window_ms();
        const std::string folded_seed = case_fold(seed.keyword);
        std::vector<Tweet> seed_tweets;
        for (const Tweet& t : report.tweets) {
            if (t.created_at >= start && t.created_at <= end && contains_folded(case_fold(t.text), folded_seed)) {
                seed_tweets.push_back(t);
            }
        }
        const auto mined = mine_subkeywords(seed_tweets, seed.keyword, c.subkeywords, tokenizer, stopwords,
                                            {c.min_token_length});
        for (std::size_t r = 0; r < mined.size(); ++r) {
            subs.row({seed.keyword, std::string(genre_name(seed.genre)), std::to_string(r + 1), mined[r].first,
                      std::to_string(mined[r].second)});
            topics.push_back(slice_topic(seed_tweets, seed.keyword, mined[r].first, start, end, seed.genre));
        }
        note(ctx, "ingest: seed \"" + seed.keyword + "\": " + std::to_string(seed_tweets.size()) + " tweets, " +
                      std::to_string(mined.size()) + " sub-keywords");
    }
    summary.topics = write_topics(c.topics_dir(), topics);
    return summary;
}

std::vector<ScoreRow> cmd_score(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const std::vector<StoredTopic> stored = read_topics(c.topics_dir());
    std::vector<std::optional<ScoreRow>> slots(stored.size());
    parallel_for(stored.size(), ctx.jobs, [&](std::size_t i) {
        const StoredTopic& st = stored[i];
        const RetweetNetwork net = build_network(st.dataset, st.entry.topic_id);
        if (!viable(net, c.viability) || net.node_count() < 2 || net.edge_count() == 0) return;
        ScoreRow row;
        row.topic = st.entry;
        const NetworkStats s = stats(net);
        row.nodes = s.node_count;
        row.edges = s.edge_count;
        row.average_degree = s.average_degree;
        row.result = normalized_score(net, topic_seed(c, "score", st.entry.topic_id), c.polarization, 1);
        slots[i] = std::move(row);
    });
    std::vector<ScoreRow> rows;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            rows.push_back(std::move(*slots[i]));
        } else {
            note(ctx, "score: skipping non-viable topic " + stored[i].entry.topic_id);
        }
    }
    if (rows.empty()) note(ctx, "score: warning: no viable topics");

    Table t(output_path(c, "results.csv"), c);
    t.row({"topic_id", "seed", "sub", "genre", "tweets", "retweets", "nodes", "edges", "average_degree", "size_a",
           "size_b", "cut_weight", "balance", "phi", "null_mean", "null_std", "phi_hat", "is_polarized",
           "unchanged_null_samples"});
    for (const ScoreRow& r : rows) {
        const PolarizationResult& p = r.result;
        t.row({r.topic.topic_id, r.topic.seed_keyword, r.topic.sub_keyword, std::string(genre_name(r.topic.genre)),
               std::to_string(r.topic.tweet_count), std::to_string(r.topic.retweet_count), std::to_string(r.nodes),
               std::to_string(r.edges), format_number(r.average_degree), std::to_string(p.bisection.size_a),
               std::to_string(p.bisection.size_b), std::to_string(p.bisection.cut_weight),
               format_number(p.bisection.balance), format_number(p.phi), format_number(p.null_mean),
               format_number(p.null_std), format_number(p.phi_hat), flag(p.is_polarized),
               std::to_string(p.unchanged_null_samples)});
    }

    constexpr int bins = 200; // width 0.02 over [-2, 2]
    std::vector<std::size_t> counts(bins, 0);
    for (const ScoreRow& r : rows) {
        const int b = static_cast<int>(std::floor((r.result.phi_hat + 2.0) * 50.0));
        ++counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
    }
    Table h(output_path(c, "histogram.csv"), c);
    h.row({"bin_lo", "bin_hi", "count"});
    for (int b = 0; b < bins; ++b) {
        h.row({format_number((b - 100) / 50.0), format_number((b - 99) / 50.0), std::to_string(counts[static_cast<std::size_t>(b)])});
    }
    return rows;
}

std::vector<ScoreTableRow> read_results(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("topic_id");
    const std::size_t c_hat = table.column("phi_hat");
    const std::size_t c_pol = table.column("is_polarized");
    std::vector<ScoreTableRow> rows;
    for (const auto& cells : table.rows) {
        rows.push_back({cells[c_id], parse_double(cells[c_hat], "phi_hat"), cells[c_pol] == "1"});
    }
    return rows;
}

namespace {

struct ScoredTopics {
    std::vector<StoredTopic> topics;
    std::vector<ScoreTableRow> scores;
};

ScoredTopics load_scored(const RunConfig& c) {
    const auto results = read_results(output_path(c, "results.csv"));
    std::map<std::string, ScoreTableRow> by_id;
    for (const auto& r : results) by_id.emplace(r.topic_id, r);
    ScoredTopics out;
    for (StoredTopic& st : read_topics(c.topics_dir())) {
        const auto it = by_id.find(st.entry.topic_id);
        if (it == by_id.end()) continue;
        out.scores.push_back(it->second);
        out.topics.push_back(std::move(st));
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

} // namespace

std::vector<FeatureRow> cmd_characterize(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const ScoredTopics scored = load_scored(c);
    std::vector<FeatureRow> rows(scored.topics.size());
    parallel_for(rows.size(), ctx.jobs, [&](std::size_t i) {
        const StoredTopic& st = scored.topics[i];
        rows[i].topic_id = st.entry.topic_id;
        rows[i].features = assemble_features(st.dataset, build_network(st.dataset, st.entry.topic_id));
        rows[i].phi_hat = scored.scores[i].phi_hat;
        rows[i].is_polarized = scored.scores[i].is_polarized;
    });
    {
        Table t(output_path(c, "features.csv"), c);
        write_features_csv(t.stream(), rows);
    }
    {
        Table t(output_path(c, "genre_ratio.csv"), c);
        t.row({"genre", "topics", "polarized", "ratio"});
        for (Genre g : kAllGenres) {
            std::size_t n = 0, pol = 0;
            for (const FeatureRow& r : rows) {
                if (r.features.genre != g) continue;
                ++n;
                pol += *r.is_polarized ? 1 : 0;
            }
            if (n == 0) continue;
            t.row({std::string(genre_name(g)), std::to_string(n), std::to_string(pol),
                   format_number(static_cast<double>(pol) / static_cast<double>(n))});
        }
    }
    using Getter = double (*)(const TopicFeatures&);
    const std::vector<std::pair<std::string, Getter>> numeric = {
        {"network_size", [](const TopicFeatures& f) { return static_cast<double>(f.network_size); }},
        {"average_degree", [](const TopicFeatures& f) { return f.average_degree; }},
        {"url_ratio", [](const TopicFeatures& f) { return f.url_ratio; }},
        {"hashtag_ratio", [](const TopicFeatures& f) { return f.hashtag_ratio; }},
        {"vocal_minority_index", [](const TopicFeatures& f) { return f.vocal_minority_index; }},
    };
    {
        Table t(output_path(c, "characteristics.csv"), c);
        t.row({"feature", "bin", "lo", "hi", "topics", "polarized", "ratio", "mean_phi_hat"});
        for (const auto& [name, get] : numeric) {
            std::vector<std::size_t> order(rows.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&, g = get](std::size_t a, std::size_t b) {
                const double va = g(rows[a].features), vb = g(rows[b].features);
                return va < vb || (va == vb && rows[a].topic_id < rows[b].topic_id);
            });
            const std::size_t n = order.size(), bins = std::min<std::size_t>(5, n);
            for (std::size_t b = 0; b < bins; ++b) {
                const std::size_t lo = b * n / bins, hi = (b + 1) * n / bins;
                std::size_t pol = 0;
                double phi_sum = 0.0;
                for (std::size_t i = lo; i < hi; ++i) {
                    pol += *rows[order[i]].is_polarized ? 1 : 0;
                    phi_sum += *rows[order[i]].phi_hat;
                }
                const auto cnt = static_cast<double>(hi - lo);
                t.row({name, std::to_string(b), format_number(get(rows[order[lo]].features)),
                       format_number(get(rows[order[hi - 1]].features)), std::to_string(hi - lo), std::to_string(pol),
                       format_number(static_cast<double>(pol) / cnt), format_number(phi_sum / cnt)});
            }
        }
    }
    {
        Table t(output_path(c, "group_summary.csv"), c);
        t.row({"feature", "group", "topics", "mean", "median"});
        for (const auto& [name, get] : numeric) {
            for (const bool polarized : {true, false}) {
                std::vector<double> v;
                for (const FeatureRow& r : rows) {
                    if (*r.is_polarized == polarized) v.push_back(get(r.features));
                }
                if (v.empty()) continue;
                double sum = 0.0;
                for (double x : v) sum += x;
                t.row({name, polarized ? "polarized" : "non_polarized", std::to_string(v.size()),
                       format_number(sum / static_cast<double>(v.size())), format_number(median(v))});
            }
        }
    }
    return rows;
}

EvalMode parse_eval_mode(const std::string& s) {
    if (s == "naive") return EvalMode::Naive;
    if (s == "ml") return EvalMode::Ml;
    if (s == "oracle") return EvalMode::Oracle;
    throw ArgumentError("unknown evaluation mode \"" + s + "\" (naive, ml, oracle)");
}

std::string_view eval_mode_name(EvalMode mode) {
    switch (mode) {
    case EvalMode::Naive: return "naive";
    case EvalMode::Ml: return "ml";
    case EvalMode::Oracle: return "oracle";
    }
    return "unknown";
}

Evaluation cmd_evaluate(const Context& ctx, EvalMode mode) {
    const RunConfig& c = ctx.config;
    ScoredTopics scored = load_scored(c);
    if (scored.topics.empty()) throw Error("evaluate: no scored topics; run score first");
    std::vector<TopicDataset> topics;
    std::vector<double> truth;
    for (std::size_t i = 0; i < scored.topics.size(); ++i) {
        topics.push_back(std::move(scored.topics[i].dataset));
        truth.push_back(scored.scores[i].phi_hat);
    }
    EvalOptions eo;
    eo.k_values = c.k_values;
    eo.trials = c.trials;
    eo.m = c.m;
    eo.threshold = c.polarization.threshold;
    eo.hour_buckets = c.hour_buckets;
    eo.seed = derive_seed(c.seed, "evaluate");

    BatchEstimator estimator;
    switch (mode) {
    case EvalMode::Naive: estimator = naive_estimator(c.viability, c.polarization, ctx.jobs); break;
    case EvalMode::Oracle: estimator = oracle_estimator(truth); break;
    case EvalMode::Ml: {
        MlEstimatorOptions mo;
        mo.forest = c.forest;
        mo.forest.rng_seed = derive_seed(c.seed, "forest");
        mo.schema = c.feature_schema();
        mo.folds = c.folds;
        mo.viability = c.viability;
        mo.polarization = c.polarization;
        mo.jobs = ctx.jobs;
        estimator = ml_estimator(truth, mo);
        break;
    }
    }
    const Evaluation ev = evaluate(topics, truth, estimator, eo);

    const std::string prefix = "eval_" + std::string(eval_mode_name(mode)) + "_";
    using CellGetter = std::optional<double> (*)(const EvalCell&);
    const std::vector<std::pair<std::string, CellGetter>> matrices = {
        {"precision", [](const EvalCell& e) { return e.precision; }},
        {"recall", [](const EvalCell& e) { return e.recall; }},
        {"f_score", [](const EvalCell& e) { return e.f_score; }},
        {"r2", [](const EvalCell& e) { return e.r2; }},
        {"counts", [](const EvalCell& e) { return std::optional<double>(e.n_topics); }},
    };
    for (const auto& [name, get] : matrices) {
        Table t(output_path(c, prefix + name + ".csv"), c);
        std::vector<std::string> header = {"k"};
        for (int l = 0; l < c.hour_buckets; ++l) header.push_back(std::to_string(l));
        t.row(header);
        for (std::size_t k : c.k_values) {
            std::vector<std::string> cells = {std::to_string(k)};
            for (int l = 0; l < c.hour_buckets; ++l) {
                const EvalCell& cell = ev.cell(k, l);
                cells.push_back(cell.n_samples == 0 && name != "counts" ? std::string() : format_optional(get(cell)));
            }
            t.row(cells);
        }
    }
    {
        Table t(output_path(c, prefix + "summary.csv"), c);
        t.row({"k", "precision", "recall", "f_score", "r2", "pooled_precision", "pooled_recall", "pooled_f_score",
               "pooled_r2", "empty_subsets", "mean_subset_size"});
        for (const KSummary& s : ev.per_k) {
            std::vector<double> tr, es;
            for (const EstimatePoint& p : ev.points) {
                if (p.k != s.k) continue;
                tr.push_back(p.truth);
                es.push_back(p.estimate);
            }
            const EstimateScores pooled = score_estimates(tr, es, c.polarization.threshold);
            t.row({std::to_string(s.k), format_optional(s.precision), format_optional(s.recall),
                   format_optional(s.f_score), format_optional(s.r2), format_optional(pooled.precision),
                   format_optional(pooled.recall), format_optional(pooled.f_score), format_optional(pooled.r2),
                   std::to_string(s.empty_subsets), format_number(s.mean_subset_size)});
        }
        t.row({"all", "", "", "", "", format_optional(ev.overall.precision), format_optional(ev.overall.recall),
               format_optional(ev.overall.f_score), format_optional(ev.overall.r2), "", ""});
    }
    {
        Table t(output_path(c, prefix + "points.csv"), c);
        t.row({"k", "topic_id", "trial", "hour_level", "subset_size", "truth", "estimate"});
        for (const EstimatePoint& p : ev.points) {
            t.row({std::to_string(p.k), scored.scores[p.topic].topic_id, std::to_string(p.trial),
                   p.hour_level ? std::to_string(*p.hour_level) : std::string(), std::to_string(p.subset_size),
                   format_number(p.truth), format_number(p.estimate)});
        }
    }
    return ev;
}

ForestModel cmd_train(const Context& ctx, const std::string& features_path, const std::string& model_path) {
    const RunConfig& c = ctx.config;
    const std::vector<FeatureRow> rows = read_features_csv(read_csv(features_path));
    const FeatureSchema schema = c.feature_schema();
    ForestConfig fc = c.forest;
    fc.rng_seed = derive_seed(c.seed, "forest");
    ForestModel model = fit_forest(rows, schema, fc, ctx.jobs);
    {
        const fs::path parent = fs::path(model_path).parent_path();
        std::error_code ec;
        if (!parent.empty()) fs::create_directories(parent, ec);
    }
    save_forest(model_path, model);

    const std::size_t train_rows = rows.size() - (rows.size() + c.folds - 1) / c.folds;
    if (rows.size() < c.folds || train_rows < fc.min_rows) {
        note(ctx, "train: too few rows for " + std::to_string(c.folds) + "-fold cross-validation; cv.csv not written");
        return model;
    }
    Matrix x;
    std::vector<double> y;
    for (const FeatureRow& r : rows) {
        x.push_back(schema.encode(r.features));
        y.push_back(*r.phi_hat);
    }
    const CrossValidation cv = cross_validate(x, y, c.folds, fc, c.polarization.threshold, nullptr, ctx.jobs);
    Table t(output_path(c, "cv.csv"), c);
    t.row({"fold", "count", "precision", "recall", "f_score", "r2"});
    auto emit = [&](const std::string& name, const EstimateScores& s) {
        t.row({name, std::to_string(s.count), format_optional(s.precision), format_optional(s.recall),
               format_optional(s.f_score), format_optional(s.r2)});
    };
    for (std::size_t f = 0; f < cv.per_fold.size(); ++f) emit(std::to_string(f), cv.per_fold[f]);
    emit("pooled", cv.pooled);
    return model;
}

std::vector<double> cmd_predict(const Context& ctx, const std::string& features_path, const std::string& model_path,
                                const std::string& out_path) {
    const RunConfig& c = ctx.config;
    const ForestModel model = load_forest(model_path);
    const std::vector<FeatureRow> rows = read_features_csv(read_csv(features_path));
    std::vector<double> preds;
    Table t(out_path, c);
    t.row({"topic_id", "phi_hat_pred", "is_polarized"});
    for (const FeatureRow& r : rows) {
        const double p = model.predict(r.features);
        preds.push_back(p);
        t.row({r.topic_id, format_number(p), flag(p > c.polarization.threshold)});
    }
    return preds;
}

SeedSelection cmd_select_seeds(const Context& ctx) {
    const RunConfig& c = ctx.config;
    if (c.news_path.empty()) throw ArgumentError("config: input.news is not set");
    const std::vector<NewsArticle> news = load_news(c.news_path);
    const SeedSelection sel = seed_select(news, c.seed_articles, DelimiterTokenizer(), derive_seed(c.seed, "seed_select"));
    Table t(output_path(c, "seed_selection.csv"), c);
    t.row({"cluster", "cluster_size", "corpus_index", "genre", "published_at", "title"});
    for (std::size_t i = 0; i < sel.representatives.size(); ++i) {
        const NewsArticle& a = sel.representatives[i];
        t.row({std::to_string(i), std::to_string(sel.cluster_sizes[i]), std::to_string(sel.representative_index[i]),
               std::string(genre_name(a.genre)), std::to_string(a.published_at), a.title});
    }
    return sel;
}

synth::Corpus cmd_synth(const std::string& dir, const synth::CorpusOptions& options, const RunConfig& base) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
    const fs::path root = fs::absolute(dir);
    synth::Corpus corpus = synth::generate_corpus(options);
    {
        std::ofstream out(root / "dump.jsonl", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write dump.jsonl");
        for (const Tweet& t : corpus.tweets) out << tweet_to_json_line(t) << '\n';
    }
    {
        // headlines for seed selection: several per seed, built from its sub-keywords
        std::ofstream out(root / "news.jsonl", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write news.jsonl");
        Rng rng(derive_seed(options.rng_seed, "synth.news"));
        const auto& catalog = synth::builtin_topics();
        for (std::size_t s = 0; s < corpus.seeds.size(); ++s) {
            const auto& subs = catalog[s].second;
            for (std::size_t a = 0; a < 12; ++a) {
                const std::string title = corpus.seeds[s].keyword + " " + subs[rng.index(subs.size())] + " " +
                                          subs[rng.index(subs.size())] + " update";
                nlohmann::ordered_json j = {{"title", title},
                                            {"genre", std::string(genre_name(corpus.seeds[s].genre))},
                                            {"published_at", corpus.seeds[s].window_start}};
                out << j.dump() << '\n';
            }
        }
    }
    RunConfig cfg = base;
    cfg.dump_path = (root / "dump.jsonl").string();
    cfg.news_path = (root / "news.jsonl").string();
    cfg.seeds.clear();
    for (const synth::SeedSpec& s : corpus.seeds) cfg.seeds.push_back({s.keyword, s.genre, s.window_start});
    cfg.seed_articles = corpus.seeds.size();
    cfg.output_dir = (root / "out").string();
    {
        std::ofstream out(root / "config.json", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write config.json");
        out << to_json(cfg);
    }
    {
        std::ofstream out(root / "planted.csv", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write planted.csv");
        write_csv_row(out, {"topic_id", "seed", "sub", "genre", "kind", "polarized", "tweets"});
        for (const synth::PlantedTopic& p : corpus.topics) {
            TopicDataset probe;
            probe.seed_keyword = p.seed_keyword;
            probe.sub_keyword = p.sub_keyword;
            write_csv_row(out, {topic_id_for(probe), p.seed_keyword, p.sub_keyword, std::string(genre_name(p.genre)),
                                std::string(synth::stream_kind_name(p.kind)), flag(p.polarized), std::to_string(p.tweets)});
        }
    }
    return corpus;
}

} // namespace rtpol::app
