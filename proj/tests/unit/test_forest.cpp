#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rtpol/error.hpp"
#include "rtpol/forest.hpp"

using namespace rtpol;

namespace {

struct Data {
    Matrix x;
    std::vector<double> y;
    std::vector<std::string> names;
};

Data make_data(std::size_t rows, std::size_t cols, std::uint64_t seed, double (*target)(const std::vector<double>&, Rng&)) {
    Rng rng(seed);
    Data d;
    for (std::size_t c = 0; c < cols; ++c) d.names.push_back("f" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> row(cols);
        for (double& v : row) v = rng.uniform(-1.0, 1.0);
        d.y.push_back(target(row, rng));
        d.x.push_back(std::move(row));
    }
    return d;
}

double first_feature(const std::vector<double>& row, Rng&) { return row[0]; }
double noise(const std::vector<double>&, Rng& rng) { return rng.uniform(); }
double mixed(const std::vector<double>& row, Rng& rng) { return row[0] * 2 + (row[1] > 0 ? 1 : 0) + 0.1 * rng.uniform(); }

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

double training_r2(const ForestModel& m, const Data& d) {
    std::vector<double> pred;
    for (const auto& row : d.x) pred.push_back(m.predict(row));
    return *r2_score(d.y, pred);
}

ForestConfig stump_config() {
    ForestConfig c;
    c.trees = 1;
    c.max_depth = 1;
    c.min_samples_leaf = 1;
    c.bootstrap = false;
    return c;
}

} // namespace

TEST_CASE("fit: planted identity relation fits the training data") {
    const Data d = make_data(300, 4, 1, first_feature);
    ForestConfig cfg;
    cfg.trees = 50;
    CHECK(training_r2(fit_forest(d.x, d.y, d.names, cfg), d) >= 0.99);
}

TEST_CASE("fit: constant target gives a degenerate forest") {
    Data d = make_data(40, 3, 2, noise);
    std::fill(d.y.begin(), d.y.end(), 0.37);
    ForestConfig cfg;
    cfg.trees = 10;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    for (const auto& tree : m.trees) CHECK(tree.nodes.size() == 1);
    for (const auto& row : d.x) CHECK(m.predict(row) == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("fit: step function stump matches exhaustive split search") {
    Data d;
    d.names = {"x"};
    Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        const double x = rng.uniform(0.0, 10.0);
        if (x > 4.0 && x < 6.0) continue; // leave a gap around the step
        d.x.push_back({x});
        d.y.push_back(x < 5.0 ? 1.0 : 3.0);
    }
    ForestConfig cfg = stump_config();
    cfg.min_rows = 1;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    REQUIRE(m.trees[0].nodes.size() == 3);
    const double t = m.trees[0].nodes[0].threshold;
    CHECK(t > 4.0);
    CHECK(t < 6.0);
    std::vector<double> xs;
    for (const auto& r : d.x) xs.push_back(r[0]);
    const auto best = oracle::best_split_1d(xs, d.y);
    CHECK(t == best.threshold);
    CHECK(m.predict({0.0}) == 1.0);
    CHECK(m.predict({9.0}) == 3.0);
}

TEST_CASE("grow_tree: depth-1 splits match the oracle on random 1-feature data") {
    ForestConfig cfg = stump_config();
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const std::size_t n = 5 + rng.index(40);
        Matrix x;
        std::vector<double> y, xs;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::round(rng.uniform(0, 20)) / 2.0; // repeated values on purpose
            x.push_back({v});
            xs.push_back(v);
            y.push_back(rng.uniform(-1, 1) + (v > 5 ? 0.5 : 0));
        }
        const auto best = oracle::best_split_1d(xs, y);
        const RegressionTree tree = grow_tree(x, y, all_rows(n), cfg, s);
        if (!best.found) {
            CHECK(tree.nodes.size() == 1);
            continue;
        }
        REQUIRE(tree.nodes.size() == 3);
        CHECK(tree.nodes[0].threshold == best.threshold);
        CHECK(tree.nodes[1].value == doctest::Approx(best.left_mean).epsilon(1e-12));
        CHECK(tree.nodes[2].value == doctest::Approx(best.right_mean).epsilon(1e-12));
    }
}

TEST_CASE("predict: identical stumps average to the stump value") {
    Data d;
    d.names = {"x"};
    for (int i = 0; i < 30; ++i) {
        d.x.push_back({static_cast<double>(i)});
        d.y.push_back(i < 10 ? -1.0 : 2.0);
    }
    ForestConfig cfg = stump_config();
    cfg.trees = 7;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    for (double q : {-5.0, 3.0, 9.4, 9.6, 100.0}) CHECK(m.predict({q}) == m.trees[0].predict({q}));
    CHECK(m.predict({-5.0}) == -1.0);
}

TEST_CASE("predict: overfit forest replays training rows") {
    const Data d = make_data(50, 3, 4, mixed);
    ForestConfig cfg;
    cfg.trees = 1;
    cfg.bootstrap = false;
    cfg.min_samples_leaf = 1;
    cfg.features_per_split = 3;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    for (std::size_t i = 0; i < d.x.size(); ++i) CHECK(std::abs(m.predict(d.x[i]) - d.y[i]) <= 1e-9);
}

TEST_CASE("predict: out-of-range inputs stay finite, width mismatch is an error") {
    const Data d = make_data(60, 2, 5, mixed);
    ForestConfig cfg;
    cfg.trees = 20;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    CHECK(std::isfinite(m.predict({1e9, -1e9})));
    CHECK_THROWS_AS(m.predict({1.0}), PredictionError);
    CHECK_THROWS_AS(m.predict(std::vector<double>{1.0, 2.0, 3.0}), PredictionError);
}

TEST_CASE("fit: input validation") {
    const Data d = make_data(19, 2, 6, mixed);
    CHECK_THROWS_AS(fit_forest(d.x, d.y, d.names), TrainingError);
    Data bad = make_data(30, 2, 6, mixed);
    bad.x[3][1] = std::nan("");
    CHECK_THROWS_AS(fit_forest(bad.x, bad.y, bad.names), TrainingError);
    Data ragged = make_data(30, 2, 6, mixed);
    ragged.x[4].pop_back();
    CHECK_THROWS_AS(fit_forest(ragged.x, ragged.y, ragged.names), TrainingError);
}

TEST_CASE("forest invariances: target shift and tree order") {
    const Data d = make_data(80, 3, 7, mixed);
    ForestConfig cfg;
    cfg.trees = 30;
    cfg.rng_seed = 11;
    const ForestModel base = fit_forest(d.x, d.y, d.names, cfg);
    Data shifted = d;
    for (double& v : shifted.y) v += 5.25;
    const ForestModel moved = fit_forest(shifted.x, shifted.y, shifted.names, cfg);
    ForestModel reversed = base;
    std::reverse(reversed.trees.begin(), reversed.trees.end());
    Rng rng(1);
    for (int q = 0; q < 200; ++q) {
        const std::vector<double> row = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        CHECK(std::abs(moved.predict(row) - (base.predict(row) + 5.25)) <= 1e-9);
        CHECK(std::abs(reversed.predict(row) - base.predict(row)) <= 1e-12);
    }
}

TEST_CASE("trees: splits reduce error, leaves respect the minimum size") {
    const Data d = make_data(150, 4, 8, mixed);
    ForestConfig cfg;
    cfg.trees = 10;
    cfg.min_samples_leaf = 3;
    const ForestModel m = fit_forest(d.x, d.y, d.names, cfg);
    for (const RegressionTree& t : m.trees) {
        for (const auto& node : t.nodes) {
            if (node.feature < 0) {
                CHECK(node.samples >= 3);
                CHECK(std::isfinite(node.value));
                continue;
            }
            const auto& l = t.nodes[static_cast<std::size_t>(node.left)];
            const auto& r = t.nodes[static_cast<std::size_t>(node.right)];
            CHECK(l.samples + r.samples == node.samples);
            CHECK(l.value != r.value);
        }
    }
}

TEST_CASE("grow_tree: every split strictly lowers the weighted child variance") {
    const Data d = make_data(120, 3, 9, mixed);
    ForestConfig cfg;
    cfg.min_samples_leaf = 2;
    const RegressionTree t = grow_tree(d.x, d.y, all_rows(d.y.size()), cfg, 3);
    // route rows to recompute each node's error from scratch
    std::vector<std::vector<std::size_t>> rows_at(t.nodes.size());
    for (std::size_t r = 0; r < d.y.size(); ++r) {
        std::size_t i = 0;
        rows_at[0].push_back(r);
        while (t.nodes[i].feature >= 0) {
            const auto& n = t.nodes[i];
            i = static_cast<std::size_t>(d.x[r][static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
            rows_at[i].push_back(r);
        }
    }
    auto sse = [&](const std::vector<std::size_t>& rows) {
        double mean = 0;
        for (std::size_t r : rows) mean += d.y[r];
        mean /= static_cast<double>(rows.size());
        double s = 0;
        for (std::size_t r : rows) s += (d.y[r] - mean) * (d.y[r] - mean);
        return s;
    };
    std::size_t splits = 0;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (t.nodes[i].feature < 0) continue;
        ++splits;
        const double children = sse(rows_at[static_cast<std::size_t>(t.nodes[i].left)]) +
                                sse(rows_at[static_cast<std::size_t>(t.nodes[i].right)]);
        CHECK(children < sse(rows_at[i]));
    }
    CHECK(splits > 5);
}

TEST_CASE("serialization: byte-identical across runs and lossless") {
    const Data d = make_data(60, 3, 10, mixed);
    ForestConfig cfg;
    cfg.trees = 15;
    cfg.rng_seed = 99;
    std::ostringstream a, b;
    save_forest(a, fit_forest(d.x, d.y, d.names, cfg, 1));
    save_forest(b, fit_forest(d.x, d.y, d.names, cfg, 3));
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    const ForestModel back = load_forest(in);
    const ForestModel orig = fit_forest(d.x, d.y, d.names, cfg);
    CHECK(back.feature_names == d.names);
    CHECK(back.config.trees == 15);
    for (const auto& row : d.x) CHECK(back.predict(row) == orig.predict(row));
    std::ostringstream again;
    save_forest(again, back);
    CHECK(again.str() == a.str());

    std::istringstream broken(a.str().substr(0, a.str().size() / 2));
    CHECK_THROWS_AS(load_forest(broken), SchemaError);
    CHECK_THROWS_AS(load_forest(std::string("/nonexistent/model.json")), IoError);
}

TEST_CASE("fit from feature rows uses the schema and requires targets") {
    std::vector<FeatureRow> rows;
    Rng rng(12);
    for (int i = 0; i < 40; ++i) {
        FeatureRow r;
        r.topic_id = "t" + std::to_string(i);
        r.features.genre = kAllGenres[rng.index(kGenreCount)];
        r.features.network_size = 50 + rng.index(500);
        r.features.url_ratio = rng.uniform();
        r.features.hashtag_ratio = rng.uniform();
        r.features.vocal_minority_index = rng.uniform(0.01, 1);
        r.phi_hat = r.features.url_ratio > 0.5 ? 0.3 : 0.0;
        rows.push_back(r);
    }
    ForestConfig cfg;
    cfg.trees = 20;
    const FeatureSchema schema;
    const ForestModel m = fit_forest(rows, schema, cfg);
    CHECK(m.feature_names == schema.names());
    TopicFeatures hi = rows[0].features;
    hi.url_ratio = 0.9;
    TopicFeatures lo = hi;
    lo.url_ratio = 0.1;
    CHECK(m.predict(hi) > m.predict(lo));
    rows[3].phi_hat.reset();
    CHECK_THROWS_AS(fit_forest(rows, schema, cfg), TrainingError);
}

TEST_CASE("cross_validate: leakage fixture and noise") {
    Data d = make_data(200, 3, 13, noise);
    for (std::size_t i = 0; i < d.x.size(); ++i) d.x[i].push_back(d.y[i]);
    d.names.push_back("target");
    ForestConfig cfg;
    cfg.trees = 40;
    cfg.features_per_split = 4;
    const CrossValidation cv = cross_validate(d.x, d.y, 10, cfg);
    CHECK(*cv.pooled.r2 >= 0.95);
    CHECK(cv.per_fold.size() == 10);

    double noise_r2 = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Data n = make_data(150, 4, 100 + s, noise);
        ForestConfig c;
        c.trees = 40;
        c.rng_seed = s;
        noise_r2 += *cross_validate(n.x, n.y, 10, c).pooled.r2;
    }
    CHECK(noise_r2 / 5.0 <= 0.1);
}

TEST_CASE("cross_validate: fold bookkeeping and grouping") {
    const Data d = make_data(60, 2, 14, mixed);
    ForestConfig cfg;
    cfg.trees = 10;
    CHECK_THROWS_AS(cross_validate(d.x, d.y, 61, cfg), ArgumentError);
    CHECK_THROWS_AS(cross_validate(d.x, d.y, 1, cfg), ArgumentError);

    std::vector<std::size_t> groups;
    for (std::size_t i = 0; i < d.x.size(); ++i) groups.push_back(i / 6);
    cfg.min_rows = 5;
    const CrossValidation cv = cross_validate(d.x, d.y, 5, cfg, 0.04, &groups);
    REQUIRE(cv.fold_of.size() == d.x.size());
    for (std::size_t i = 0; i < d.x.size(); ++i) CHECK(cv.fold_of[i] == cv.fold_of[(i / 6) * 6]);
    std::vector<std::size_t> per_fold(5, 0);
    for (std::size_t f : cv.fold_of) ++per_fold[f];
    for (std::size_t c : per_fold) CHECK(c == 12);
    CHECK_THROWS_AS(cross_validate(d.x, d.y, 11, cfg, 0.04, &groups), ArgumentError);

    const CrossValidation again = cross_validate(d.x, d.y, 5, cfg, 0.04, &groups);
    CHECK(again.predictions == cv.predictions);
}
