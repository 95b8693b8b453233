#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rtpol/error.hpp"
#include "rtpol/random.hpp"

namespace rtpol::app {

using json = nlohmann::ordered_json;

namespace {

std::string_view null_model_name(NullModel m) {
    return m == NullModel::JointDegree ? "joint_degree" : "degree_sequence";
}

NullModel parse_null_model(const std::string& s) {
    if (s == "degree_sequence") return NullModel::DegreeSequence;
    if (s == "joint_degree") return NullModel::JointDegree;
    throw ArgumentError("config: polarization.null_model must be degree_sequence or joint_degree, got \"" + s + "\"");
}

json to_object(const RunConfig& c) {
    json seeds = json::array();
    for (const auto& s : c.seeds) {
        seeds.push_back({{"keyword", s.keyword}, {"genre", std::string(genre_name(s.genre))}, {"window_start", s.window_start}});
    }
    const DumpSchema& d = c.schema;
    const PartitionOptions& p = c.polarization.partition;
    const ForestConfig& f = c.forest;
    return {
        {"input",
         {{"dump", c.dump_path},
          {"news", c.news_path},
          {"schema",
           {{"id", d.id},
            {"author_id", d.author_id},
            {"created_at", d.created_at},
            {"text", d.text},
            {"retweet_of_author", d.retweet_of_author},
            {"retweet_of_tweet", d.retweet_of_tweet},
            {"urls", d.urls},
            {"hashtags", d.hashtags}}},
          {"seeds", seeds}}},
        {"tokenizer", {{"stopwords", c.stopwords_path}, {"min_token_length", c.min_token_length}}},
        {"subkeywords", c.subkeywords},
        {"window_hours", c.window_hours},
        {"viability", {{"min_nodes", c.viability.min_nodes}, {"min_edges", c.viability.min_edges}}},
        {"partition",
         {{"max_imbalance", p.max_imbalance},
          {"coarsen_threshold", p.coarsen_threshold},
          {"restarts", p.restarts},
          {"fm_passes", p.fm_passes},
          {"initial_tries", p.initial_tries}}},
        {"polarization",
         {{"null_samples", c.polarization.samples},
          {"threshold", c.polarization.threshold},
          {"swap_factor", c.polarization.rewire.swap_factor},
          {"null_model", std::string(null_model_name(c.polarization.rewire.model))}}},
        {"sampling", {{"k_values", c.k_values}, {"m", c.m}, {"trials", c.trials}, {"hour_buckets", c.hour_buckets}}},
        {"forest",
         {{"trees", f.trees},
          {"features_per_split", f.features_per_split},
          {"min_samples_leaf", f.min_samples_leaf},
          {"max_depth", f.max_depth},
          {"bootstrap", f.bootstrap},
          {"min_rows", f.min_rows},
          {"folds", c.folds},
          {"average_degree_feature", c.feature_average_degree},
          {"naive_phi_hat_feature", c.feature_naive_phi_hat}}},
        {"seed_select", {{"articles", c.seed_articles}}},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
    };
}

/// Reads an object, rejecting keys outside `known`.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ArgumentError("config: " + where() + " must be an object");
    }

    void known(std::initializer_list<const char*> keys) const {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!allowed.count(it.key())) throw ArgumentError("config: unknown key " + join(it.key()));
        }
    }

    template <class T>
    void get(const char* key, T& out) const {
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ArgumentError("config: " + join(key) + " has the wrong type");
        }
    }

    template <class T>
    void get_unsigned(const char* key, T& out) const {
        if (!j_.contains(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ArgumentError("config: " + join(key) + " must be a non-negative integer");
        }
        out = static_cast<T>(v.get<std::uint64_t>());
    }

    bool has(const char* key) const { return j_.contains(key); }
    Reader child(const char* key) const { return Reader(j_.at(key), join(key)); }
    const json& raw(const char* key) const { return j_.at(key); }
    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "top level" : path_; }
    const json& j_;
    std::string path_;
};

} // namespace

std::string to_json(const RunConfig& config) { return to_object(config).dump(2) + "\n"; }

RunConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ArgumentError(std::string("config is not valid JSON: ") + ex.what());
    }
    RunConfig c;
    Reader top(doc, "");
    top.known({"input", "tokenizer", "subkeywords", "window_hours", "viability", "partition", "polarization", "sampling",
               "forest", "seed_select", "seed", "output_dir"});
    if (top.has("input")) {
        Reader in = top.child("input");
        in.known({"dump", "news", "schema", "seeds"});
        in.get("dump", c.dump_path);
        in.get("news", c.news_path);
        if (in.has("schema")) {
            Reader s = in.child("schema");
            s.known({"id", "author_id", "created_at", "text", "retweet_of_author", "retweet_of_tweet", "urls", "hashtags"});
            s.get("id", c.schema.id);
            s.get("author_id", c.schema.author_id);
            s.get("created_at", c.schema.created_at);
            s.get("text", c.schema.text);
            s.get("retweet_of_author", c.schema.retweet_of_author);
            s.get("retweet_of_tweet", c.schema.retweet_of_tweet);
            s.get("urls", c.schema.urls);
            s.get("hashtags", c.schema.hashtags);
        }
        if (in.has("seeds")) {
            const json& arr = in.raw("seeds");
            if (!arr.is_array()) throw ArgumentError("config: input.seeds must be a list");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                Reader s(arr[i], "input.seeds[" + std::to_string(i) + "]");
                s.known({"keyword", "genre", "window_start"});
                SeedKeyword k;
                s.get("keyword", k.keyword);
                std::string genre = std::string(genre_name(k.genre));
                s.get("genre", genre);
                k.genre = parse_genre(genre);
                s.get("window_start", k.window_start);
                if (k.keyword.empty()) throw ArgumentError("config: input.seeds[" + std::to_string(i) + "].keyword is empty");
                c.seeds.push_back(std::move(k));
            }
        }
    }
    if (top.has("tokenizer")) {
        Reader t = top.child("tokenizer");
        t.known({"stopwords", "min_token_length"});
        t.get("stopwords", c.stopwords_path);
        t.get_unsigned("min_token_length", c.min_token_length);
    }
    top.get_unsigned("subkeywords", c.subkeywords);
    top.get("window_hours", c.window_hours);
    if (top.has("viability")) {
        Reader v = top.child("viability");
        v.known({"min_nodes", "min_edges"});
        v.get_unsigned("min_nodes", c.viability.min_nodes);
        v.get_unsigned("min_edges", c.viability.min_edges);
    }
    if (top.has("partition")) {
        Reader p = top.child("partition");
        PartitionOptions& o = c.polarization.partition;
        p.known({"max_imbalance", "coarsen_threshold", "restarts", "fm_passes", "initial_tries"});
        p.get("max_imbalance", o.max_imbalance);
        p.get_unsigned("coarsen_threshold", o.coarsen_threshold);
        p.get_unsigned("restarts", o.restarts);
        p.get_unsigned("fm_passes", o.fm_passes);
        p.get_unsigned("initial_tries", o.initial_tries);
    }
    if (top.has("polarization")) {
        Reader p = top.child("polarization");
        p.known({"null_samples", "threshold", "swap_factor", "null_model"});
        p.get_unsigned("null_samples", c.polarization.samples);
        p.get("threshold", c.polarization.threshold);
        p.get("swap_factor", c.polarization.rewire.swap_factor);
        std::string model(null_model_name(c.polarization.rewire.model));
        p.get("null_model", model);
        c.polarization.rewire.model = parse_null_model(model);
    }
    if (top.has("sampling")) {
        Reader s = top.child("sampling");
        s.known({"k_values", "m", "trials", "hour_buckets"});
        s.get("k_values", c.k_values);
        s.get_unsigned("m", c.m);
        s.get_unsigned("trials", c.trials);
        s.get("hour_buckets", c.hour_buckets);
    }
    if (top.has("forest")) {
        Reader f = top.child("forest");
        f.known({"trees", "features_per_split", "min_samples_leaf", "max_depth", "bootstrap", "min_rows", "folds",
                 "average_degree_feature", "naive_phi_hat_feature"});
        f.get_unsigned("trees", c.forest.trees);
        f.get_unsigned("features_per_split", c.forest.features_per_split);
        f.get_unsigned("min_samples_leaf", c.forest.min_samples_leaf);
        f.get_unsigned("max_depth", c.forest.max_depth);
        f.get("bootstrap", c.forest.bootstrap);
        f.get_unsigned("min_rows", c.forest.min_rows);
        f.get_unsigned("folds", c.folds);
        f.get("average_degree_feature", c.feature_average_degree);
        f.get("naive_phi_hat_feature", c.feature_naive_phi_hat);
    }
    if (top.has("seed_select")) {
        Reader s = top.child("seed_select");
        s.known({"articles"});
        s.get_unsigned("articles", c.seed_articles);
    }
    top.get_unsigned("seed", c.seed);
    top.get("output_dir", c.output_dir);

    if (!(c.window_hours > 0.0)) throw ArgumentError("config: window_hours must be positive");
    if (c.subkeywords == 0) throw ArgumentError("config: subkeywords must be at least 1");
    if (c.m == 0 || c.trials == 0) throw ArgumentError("config: sampling.m and sampling.trials must be at least 1");
    for (std::size_t k : c.k_values) {
        if (k == 0) throw ArgumentError("config: sampling.k_values must be positive");
    }
    if (c.hour_buckets < 1) throw ArgumentError("config: sampling.hour_buckets must be at least 1");
    const double imb = c.polarization.partition.max_imbalance;
    if (!(imb >= 0.5 && imb < 1.0)) throw ArgumentError("config: partition.max_imbalance must be in [0.5, 1)");
    if (c.polarization.partition.restarts == 0) throw ArgumentError("config: partition.restarts must be at least 1");
    if (c.forest.trees == 0) throw ArgumentError("config: forest.trees must be at least 1");
    if (c.folds < 2) throw ArgumentError("config: forest.folds must be at least 2");
    if (c.output_dir.empty()) throw ArgumentError("config: output_dir is empty");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_hash(const RunConfig& config) {
    RunConfig keyed = config;
    keyed.output_dir.clear(); // where tables land does not change their contents
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(keyed))));
    return buf;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

} // namespace rtpol::app
