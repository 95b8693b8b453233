#include "rtpol/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "rtpol/error.hpp"
#include "rtpol/parallel.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

using ordered_json = nlohmann::ordered_json;

double RegressionTree::predict(const std::vector<double>& x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const Node& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

std::size_t RegressionTree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return best;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature < 0; }));
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;
};

constexpr double kTieTolerance = 1e-10;

std::size_t resolve_mtry(const ForestConfig& config, std::size_t p) {
    const std::size_t m = config.features_per_split == 0 ? (p + 2) / 3 : config.features_per_split;
    return std::clamp<std::size_t>(m, 1, p);
}

} // namespace

RegressionTree grow_tree(const Matrix& x, const std::vector<double>& y, const std::vector<std::size_t>& sample,
                         const ForestConfig& config, std::uint64_t seed) {
    RTPOL_CHECK(!sample.empty(), "grow_tree needs at least one sample");
    const std::size_t p = x.front().size();
    const std::size_t mtry = resolve_mtry(config, p);
    const std::size_t min_leaf = std::max<std::size_t>(config.min_samples_leaf, 1);
    Rng rng(seed);

    RegressionTree tree;
    struct Work {
        std::size_t node;
        std::size_t depth;
        std::vector<std::size_t> rows;
    };
    std::vector<Work> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, sample});

    std::vector<std::size_t> features(p);
    std::vector<std::size_t> order;
    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        const std::size_t n = w.rows.size();
        double mean = 0.0;
        bool pure = true;
        for (std::size_t r : w.rows) {
            mean += y[r];
            pure = pure && y[r] == y[w.rows.front()];
        }
        mean /= static_cast<double>(n);
        double sse = 0.0;
        for (std::size_t r : w.rows) sse += (y[r] - mean) * (y[r] - mean);
        tree.nodes[w.node].value = pure ? y[w.rows.front()] : mean;
        tree.nodes[w.node].samples = n;

        // purity by exact equality: a rounded sse of identical targets need not be 0
        const bool may_split = n >= 2 * min_leaf && !pure && (config.max_depth == 0 || w.depth < config.max_depth);
        if (!may_split) continue;

        std::iota(features.begin(), features.end(), std::size_t{0});
        rng.shuffle(features);
        Split best;
        std::size_t tried = 0;
        for (std::size_t f : features) {
            if (tried == mtry) break;
            order = w.rows;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x[a][f] < x[b][f] || (x[a][f] == x[b][f] && a < b);
            });
            if (x[order.front()][f] == x[order.back()][f]) continue; // constant here, not counted
            ++tried;
            double left_sum = 0.0; // of centered targets
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_sum += y[order[i]] - mean;
                const double lo = x[order[i]][f], hi = x[order[i + 1]][f];
                const std::size_t nl = i + 1, nr = n - nl;
                if (lo == hi || nl < min_leaf || nr < min_leaf) continue;
                const double gain = left_sum * left_sum / static_cast<double>(nl) +
                                    left_sum * left_sum / static_cast<double>(nr);
                // gains equal up to rounding count as ties and keep the first candidate
                if (gain > best.gain * (1.0 + kTieTolerance)) {
                    double t = lo + (hi - lo) / 2.0;
                    if (!(t < hi)) t = lo;
                    best = {static_cast<int>(f), t, gain, nl};
                }
            }
        }
        if (best.feature < 0 || !(best.gain > 1e-12 * sse)) continue;

        const auto f = static_cast<std::size_t>(best.feature);
        std::vector<std::size_t> left, right;
        for (std::size_t r : w.rows) (x[r][f] <= best.threshold ? left : right).push_back(r);
        const auto li = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& node = tree.nodes[w.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = li;
        node.right = li + 1;
        stack.push_back({static_cast<std::size_t>(li + 1), w.depth + 1, std::move(right)});
        stack.push_back({static_cast<std::size_t>(li), w.depth + 1, std::move(left)});
    }
    return tree;
}

double ForestModel::predict(const std::vector<double>& x) const {
    if (x.size() != width()) {
        throw PredictionError("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                              std::to_string(width()));
    }
    if (trees.empty()) throw PredictionError("model has no trees");
    double sum = 0.0;
    for (const RegressionTree& t : trees) sum += t.predict(x);
    return sum / static_cast<double>(trees.size());
}

FeatureSchema ForestModel::schema() const {
    FeatureSchema s;
    s.average_degree = std::find(feature_names.begin(), feature_names.end(), "average_degree") != feature_names.end();
    s.naive_phi_hat = std::find(feature_names.begin(), feature_names.end(), "naive_phi_hat") != feature_names.end();
    if (s.names() != feature_names) throw PredictionError("model feature schema is not a known topic feature layout");
    return s;
}

double ForestModel::predict(const TopicFeatures& features) const { return predict(schema().encode(features)); }

ForestModel fit_forest(const Matrix& x, const std::vector<double>& y, std::vector<std::string> feature_names,
                       const ForestConfig& config, unsigned jobs) {
    if (x.size() != y.size()) throw TrainingError("feature rows and targets differ in length");
    if (x.size() < config.min_rows) {
        throw TrainingError("need at least " + std::to_string(config.min_rows) + " rows, got " + std::to_string(x.size()));
    }
    if (config.trees == 0) throw TrainingError("forest needs at least one tree");
    const std::size_t p = feature_names.size();
    if (p == 0) throw TrainingError("no features");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != p) throw TrainingError("row " + std::to_string(i) + " has the wrong width");
        if (!std::isfinite(y[i])) throw TrainingError("row " + std::to_string(i) + " has a non-finite target");
        for (double v : x[i]) {
            if (!std::isfinite(v)) throw TrainingError("row " + std::to_string(i) + " has a non-finite feature");
        }
    }
    ForestModel model;
    model.feature_names = std::move(feature_names);
    model.config = config;
    model.trees.resize(config.trees);
    const std::size_t n = x.size();
    parallel_for(config.trees, jobs, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(config.rng_seed, "forest.tree", t);
        std::vector<std::size_t> sample(n);
        if (config.bootstrap) {
            Rng rng(derive_seed(seed, "forest.bootstrap"));
            for (auto& s : sample) s = static_cast<std::size_t>(rng.index(n));
            std::sort(sample.begin(), sample.end());
        } else {
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        model.trees[t] = grow_tree(x, y, sample, config, derive_seed(seed, "forest.split"));
    });
    return model;
}

ForestModel fit_forest(const std::vector<FeatureRow>& rows, const FeatureSchema& schema, const ForestConfig& config,
                       unsigned jobs) {
    Matrix x;
    std::vector<double> y;
    for (const FeatureRow& r : rows) {
        if (!r.phi_hat) throw TrainingError("row " + r.topic_id + " has no phi_hat target");
        x.push_back(schema.encode(r.features));
        y.push_back(*r.phi_hat);
    }
    return fit_forest(x, y, schema.names(), config, jobs);
}

namespace {

constexpr const char* kFormat = "rtpol-forest";
constexpr int kVersion = 1;

} // namespace

void save_forest(std::ostream& out, const ForestModel& model) {
    ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["feature_schema"] = model.feature_names;
    j["config"] = {{"trees", model.config.trees},
                   {"features_per_split", model.config.features_per_split},
                   {"min_samples_leaf", model.config.min_samples_leaf},
                   {"max_depth", model.config.max_depth},
                   {"bootstrap", model.config.bootstrap},
                   {"rng_seed", model.config.rng_seed},
                   {"min_rows", model.config.min_rows}};
    auto& trees = j["trees"] = ordered_json::array();
    for (const RegressionTree& t : model.trees) {
        ordered_json feature = ordered_json::array(), threshold = ordered_json::array(), left = ordered_json::array(),
                     right = ordered_json::array(), value = ordered_json::array(), samples = ordered_json::array();
        for (const auto& n : t.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            value.push_back(n.value);
            samples.push_back(n.samples);
        }
        trees.push_back({{"feature", feature},
                         {"threshold", threshold},
                         {"left", left},
                         {"right", right},
                         {"value", value},
                         {"samples", samples}});
    }
    out << j.dump() << '\n';
}

void save_forest(const std::string& path, const ForestModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write model file " + path);
    save_forest(out, model);
    if (!out) throw IoError("write failed: " + path);
}

ForestModel load_forest(std::istream& in) {
    ForestModel m;
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("format").get<std::string>() != kFormat) throw SchemaError("not a forest model file");
        if (j.at("version").get<int>() != kVersion) throw SchemaError("unsupported model version");
        m.feature_names = j.at("feature_schema").get<std::vector<std::string>>();
        const auto& c = j.at("config");
        m.config.trees = c.at("trees").get<std::size_t>();
        m.config.features_per_split = c.at("features_per_split").get<std::size_t>();
        m.config.min_samples_leaf = c.at("min_samples_leaf").get<std::size_t>();
        m.config.max_depth = c.at("max_depth").get<std::size_t>();
        m.config.bootstrap = c.at("bootstrap").get<bool>();
        m.config.rng_seed = c.at("rng_seed").get<std::uint64_t>();
        m.config.min_rows = c.value("min_rows", std::size_t{20});
        for (const auto& t : j.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<std::int32_t>>();
            const auto right = t.at("right").get<std::vector<std::int32_t>>();
            const auto value = t.at("value").get<std::vector<double>>();
            const auto samples = t.at("samples").get<std::vector<std::size_t>>();
            const std::size_t n = feature.size();
            if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n ||
                samples.size() != n) {
                throw SchemaError("tree node arrays differ in length");
            }
            RegressionTree tree;
            tree.nodes.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                auto& node = tree.nodes[i];
                node = {feature[i], threshold[i], left[i], right[i], value[i], samples[i]};
                if (node.feature >= 0) {
                    const bool ok = static_cast<std::size_t>(node.feature) < m.feature_names.size() &&
                                    node.left > static_cast<std::int32_t>(i) && node.right > static_cast<std::int32_t>(i) &&
                                    static_cast<std::size_t>(node.left) < n && static_cast<std::size_t>(node.right) < n;
                    if (!ok) throw SchemaError("tree node " + std::to_string(i) + " has invalid links");
                }
            }
            m.trees.push_back(std::move(tree));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("malformed model file: ") + ex.what());
    }
    return m;
}

ForestModel load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read model file " + path);
    return load_forest(in);
}

CrossValidation cross_validate(const Matrix& x, const std::vector<double>& y, std::size_t folds,
                               const ForestConfig& config, double threshold, const std::vector<std::size_t>* groups,
                               unsigned jobs) {
    const std::size_t n = x.size();
    if (y.size() != n) throw ArgumentError("cross_validate: rows and targets differ in length");
    if (folds < 2) throw ArgumentError("cross_validate: need at least 2 folds");
    if (groups && groups->size() != n) throw ArgumentError("cross_validate: one group label per row required");

    // unit = group id (or row); units are shuffled and dealt round-robin
    std::vector<std::size_t> unit_of(n);
    std::vector<std::size_t> units;
    if (groups) {
        std::map<std::size_t, std::size_t> dense;
        for (std::size_t g : *groups) dense.emplace(g, 0);
        std::size_t next = 0;
        for (auto& [g, d] : dense) d = next++;
        for (std::size_t i = 0; i < n; ++i) unit_of[i] = dense[(*groups)[i]];
        units.resize(dense.size());
    } else {
        std::iota(unit_of.begin(), unit_of.end(), std::size_t{0});
        units.resize(n);
    }
    if (folds > units.size()) {
        throw ArgumentError("cross_validate: " + std::to_string(folds) + " folds but only " +
                            std::to_string(units.size()) + (groups ? " groups" : " rows"));
    }
    std::iota(units.begin(), units.end(), std::size_t{0});
    Rng rng(derive_seed(config.rng_seed, "cv.folds"));
    rng.shuffle(units);
    std::vector<std::size_t> fold_of_unit(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) fold_of_unit[units[i]] = i % folds;

    CrossValidation cv;
    cv.predictions.assign(n, 0.0);
    cv.fold_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) cv.fold_of[i] = fold_of_unit[unit_of[i]];
    const std::vector<std::string> names(x.empty() ? 0 : x.front().size(), "x");
    for (std::size_t f = 0; f < folds; ++f) {
        Matrix train_x;
        std::vector<double> train_y;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < n; ++i) {
            if (cv.fold_of[i] == f) {
                test.push_back(i);
            } else {
                train_x.push_back(x[i]);
                train_y.push_back(y[i]);
            }
        }
        ForestConfig fold_config = config;
        fold_config.rng_seed = derive_seed(config.rng_seed, "cv.fold", f);
        const ForestModel model = fit_forest(train_x, train_y, names, fold_config, jobs);
        std::vector<double> fold_truth, fold_pred;
        for (std::size_t i : test) {
            cv.predictions[i] = model.predict(x[i]);
            fold_truth.push_back(y[i]);
            fold_pred.push_back(cv.predictions[i]);
        }
        cv.per_fold.push_back(score_estimates(fold_truth, fold_pred, threshold));
    }
    cv.pooled = score_estimates(y, cv.predictions, threshold);
    return cv;
}

} // namespace rtpol
