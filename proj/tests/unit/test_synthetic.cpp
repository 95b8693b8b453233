#include <doctest.h>

#include <set>

#include "rtpol/estimators.hpp"
#include "rtpol/synthetic.hpp"

using namespace rtpol;

namespace {

synth::CorpusOptions quick_corpus() {
    synth::CorpusOptions o;
    o.min_tweets = 800;
    o.max_tweets = 1200;
    o.rng_seed = 3;
    return o;
}

} // namespace

TEST_CASE("generate_corpus: default shape and planted labels") {
    const synth::Corpus c = synth::generate_corpus(quick_corpus());
    REQUIRE(c.topics.size() == 60);
    REQUIRE(c.seeds.size() == 6);
    std::size_t polarized = 0, star = 0, pref = 0;
    for (const auto& t : c.topics) {
        polarized += t.polarized ? 1 : 0;
        star += t.kind == synth::StreamKind::Star ? 1 : 0;
        pref += t.kind == synth::StreamKind::Preferential ? 1 : 0;
        CHECK(t.polarized == (t.kind == synth::StreamKind::Polarized));
        CHECK(t.tweets >= 800);
        CHECK(t.tweets <= 1200);
        CHECK(t.window_end - t.window_start == 12 * kHourMs);
    }
    CHECK(polarized == 30);
    CHECK(star + pref == 30);
    CHECK(star > 0);
    CHECK(pref > 0);
    CHECK(std::is_sorted(c.tweets.begin(), c.tweets.end(), tweet_time_less));
    std::set<std::string> ids;
    for (const Tweet& t : c.tweets) CHECK(ids.insert(t.id).second);
}

TEST_CASE("generate_corpus: slicing recovers every planted topic exactly") {
    const synth::Corpus c = synth::generate_corpus(quick_corpus());
    for (const auto& t : c.topics) {
        const TopicDataset d = slice_topic(c.tweets, t.seed_keyword, t.sub_keyword, t.window_start, t.window_end, t.genre);
        CHECK(d.tweets.size() == t.tweets);
    }
}

TEST_CASE("generate_corpus: mined sub-keywords are the planted ones") {
    const synth::Corpus c = synth::generate_corpus(quick_corpus());
    const auto stop = default_stopwords();
    for (const auto& seed : c.seeds) {
        std::vector<Tweet> in_window;
        std::set<std::string> planted;
        for (const auto& t : c.topics) {
            if (t.seed_keyword == seed.keyword) planted.insert(t.sub_keyword);
        }
        for (const Tweet& tw : c.tweets) {
            if (tw.created_at >= seed.window_start && tw.created_at <= seed.window_start + 12 * kHourMs &&
                contains_folded(case_fold(tw.text), seed.keyword)) {
                in_window.push_back(tw);
            }
        }
        std::set<std::string> mined;
        for (const auto& [tok, n] : mine_subkeywords(in_window, seed.keyword, 10, DelimiterTokenizer{}, stop)) {
            mined.insert(tok);
        }
        CHECK(mined == planted);
    }
}

TEST_CASE("generate_corpus is deterministic in its seed") {
    const auto a = synth::generate_corpus(quick_corpus());
    const auto b = synth::generate_corpus(quick_corpus());
    CHECK(a.tweets == b.tweets);
    auto other = quick_corpus();
    other.rng_seed = 4;
    CHECK(synth::generate_corpus(other).tweets != a.tweets);
}

TEST_CASE("generate_stream: all three kinds respect the type invariants") {
    for (auto kind : {synth::StreamKind::Polarized, synth::StreamKind::Preferential, synth::StreamKind::Star}) {
        synth::StreamParams p;
        p.kind = kind;
        p.tweets = 1000;
        const TopicDataset d = synth::generate_stream(p, "storm", "coast", Genre::WeatherDisaster, 1000, "t", "u", 1);
        CHECK(d.tweets.size() == 1000);
        for (const Tweet& t : d.tweets) {
            CHECK(t.created_at >= d.window_start);
            CHECK(t.created_at <= d.window_end);
            const std::string folded = case_fold(t.text);
            CHECK(contains_folded(folded, "storm"));
            CHECK(contains_folded(folded, "coast"));
            CHECK(t.retweet_of_author.has_value() == t.retweet_of_tweet.has_value());
        }
        CHECK(viable(build_network(d)));
    }
}

TEST_CASE("ml_estimator: out-of-fold predictions, one per draw") {
    std::vector<TopicDataset> topics;
    std::vector<double> truth;
    for (std::uint64_t i = 0; i < 24; ++i) {
        synth::StreamParams p;
        p.kind = i % 2 ? synth::StreamKind::Polarized : synth::StreamKind::Star;
        p.tweets = 600 + 40 * i;
        p.url_rate = i % 2 ? 0.7 : 0.2;
        topics.push_back(synth::generate_stream(p, "vote", "s" + std::to_string(i), Genre::Politics, 0,
                                                "t" + std::to_string(i) + "_", "u" + std::to_string(i) + "_", i));
        truth.push_back(i % 2 ? 0.3 : 0.0);
    }
    MlEstimatorOptions opts;
    opts.forest.trees = 30;
    opts.folds = 6;
    EvalOptions eval;
    eval.k_values = {5};
    eval.trials = 2;
    const Evaluation ev = evaluate(topics, truth, ml_estimator(truth, opts), eval);
    CHECK(ev.points.size() == 48);
    REQUIRE(ev.overall.recall.has_value());
    CHECK(*ev.overall.recall >= 0.8);
    CHECK(*ev.overall.precision >= 0.8);

    const Evaluation again = evaluate(topics, truth, ml_estimator(truth, opts), eval);
    for (std::size_t i = 0; i < ev.points.size(); ++i) CHECK(again.points[i].estimate == ev.points[i].estimate);

    MlEstimatorOptions naive_feature = opts;
    naive_feature.schema.naive_phi_hat = true;
    naive_feature.polarization.samples = 4;
    const TopicFeatures f = subset_features(draw_sample(topics[1], {1, 3, 1}), naive_feature.schema, 1, naive_feature);
    CHECK(f.naive_phi_hat == std::optional<double>(0.0)); // too small to score
}
