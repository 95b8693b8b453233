#include "rtpol/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rtpol/error.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kGenreCount> kGenreNames = {
    "International", "Politics", "Business", "Social", "Sports", "Science\xC2\xB7" "Culture", "Life",
    "Weather\xC2\xB7" "Disaster",
};

std::string ascii_key(std::string_view label) {
    std::string out;
    for (std::size_t i = 0; i < label.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(label[i]);
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

const json* lookup(const json& record, std::string_view path) {
    const json* cur = &record;
    while (!path.empty()) {
        const std::size_t dot = path.find('.');
        const std::string key(path.substr(0, dot));
        if (!cur->is_object()) return nullptr;
        auto it = cur->find(key);
        if (it == cur->end()) return nullptr;
        cur = &*it;
        path = dot == std::string_view::npos ? std::string_view{} : path.substr(dot + 1);
    }
    return cur;
}

std::optional<std::string> as_id_string(const json* v) {
    if (v == nullptr || v->is_null()) return std::nullopt;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_number_integer() || v->is_number_unsigned()) return v->dump();
    return std::nullopt;
}

std::optional<EpochMs> as_epoch(const json* v) {
    if (v == nullptr) return std::nullopt;
    if (v->is_number_integer() || v->is_number_unsigned()) return v->get<EpochMs>();
    if (v->is_number_float()) {
        const double d = v->get<double>();
        if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 9e15) return std::nullopt;
        return static_cast<EpochMs>(d);
    }
    if (v->is_string()) {
        const std::string s = v->get<std::string>();
        if (s.empty()) return std::nullopt;
        std::size_t used = 0;
        try {
            const long long x = std::stoll(s, &used);
            if (used != s.size()) return std::nullopt;
            return static_cast<EpochMs>(x);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool read_string_list(const json* v, std::vector<std::string>& out) {
    out.clear();
    if (v == nullptr || v->is_null()) return true;
    if (!v->is_array()) return false;
    for (const auto& item : *v) {
        if (!item.is_string()) return false;
        out.push_back(item.get<std::string>());
    }
    return true;
}

std::optional<Tweet> decode_record(const std::string& line, const DumpSchema& schema) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) return std::nullopt;

    Tweet t;
    auto id = as_id_string(lookup(record, schema.id));
    auto author = as_id_string(lookup(record, schema.author_id));
    auto created = as_epoch(lookup(record, schema.created_at));
    const json* text = lookup(record, schema.text);
    if (!id || id->empty() || !author || author->empty() || !created || *created < 0) return std::nullopt;
    if (text != nullptr && !text->is_null() && !text->is_string()) return std::nullopt;
    t.id = std::move(*id);
    t.author_id = std::move(*author);
    t.created_at = *created;
    if (text != nullptr && text->is_string()) t.text = text->get<std::string>();

    auto rt_author = as_id_string(lookup(record, schema.retweet_of_author));
    auto rt_tweet = as_id_string(lookup(record, schema.retweet_of_tweet));
    if (rt_author && rt_author->empty()) rt_author.reset();
    if (rt_tweet && rt_tweet->empty()) rt_tweet.reset();
    if (rt_author.has_value() != rt_tweet.has_value()) return std::nullopt;
    t.retweet_of_author = std::move(rt_author);
    t.retweet_of_tweet = std::move(rt_tweet);

    if (!read_string_list(lookup(record, schema.urls), t.urls)) return std::nullopt;
    if (!read_string_list(lookup(record, schema.hashtags), t.hashtags)) return std::nullopt;
    return t;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

} // namespace

std::string_view genre_name(Genre g) { return kGenreNames[static_cast<std::size_t>(g)]; }

Genre parse_genre(std::string_view label) {
    const std::string key = ascii_key(label);
    for (Genre g : kAllGenres) {
        if (ascii_key(genre_name(g)) == key) return g;
    }
    throw ArgumentError("unknown genre label: " + std::string(label));
}

bool tweet_time_less(const Tweet& a, const Tweet& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
}

ParseReport parse_dump_lines(const std::vector<std::string>& lines, const DumpSchema& schema,
                             std::string_view source) {
    ParseReport report;
    std::unordered_set<std::string> seen;
    std::string sample;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (is_blank(line)) continue;
        ++report.lines;
        auto tweet = decode_record(line, schema);
        if (tweet && seen.insert(tweet->id).second) {
            report.tweets.push_back(std::move(*tweet));
        } else {
            ++report.malformed;
            report.malformed_lines.push_back(i + 1);
            if (sample.empty()) sample = line.substr(0, 200);
        }
    }
    if (report.malformed * 2 > report.lines) {
        throw SchemaError(std::string(source) + ": " + std::to_string(report.malformed) + " of " +
                          std::to_string(report.lines) + " lines do not match the dump schema; e.g. line " +
                          std::to_string(report.malformed_lines.front()) + ": " + sample);
    }
    return report;
}

ParseReport parse_dump(const std::string& path, const DumpSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read dump file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(std::move(line));
    if (in.bad()) throw IoError("error while reading dump file: " + path);
    return parse_dump_lines(lines, schema, path);
}

std::string tweet_to_json_line(const Tweet& t) {
    // ordered_json keeps field order stable so dumps are byte-reproducible
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["author_id"] = t.author_id;
    j["created_at"] = t.created_at;
    j["text"] = t.text;
    if (t.retweet_of_author) {
        j["retweet_of_author"] = *t.retweet_of_author;
        j["retweet_of_tweet"] = *t.retweet_of_tweet;
    }
    j["urls"] = t.urls;
    j["hashtags"] = t.hashtags;
    return j.dump();
}

std::vector<std::pair<std::string, std::size_t>> mine_subkeywords(const std::vector<Tweet>& tweets,
                                                                  std::string_view seed, std::size_t k,
                                                                  const Tokenizer& tokenizer,
                                                                  const StopwordSet& stopwords,
                                                                  const SubkeywordOptions& options) {
    if (k == 0) throw ArgumentError("mine_subkeywords: k must be at least 1");
    const std::string folded_seed = case_fold(seed);
    std::unordered_map<std::string, std::size_t> counts;
    for (const Tweet& t : tweets) {
        for (auto& token : tokenizer.tokenize(t.text)) {
            if (token == folded_seed || stopwords.count(token) != 0) continue;
            if (utf8_length(token) < options.min_token_length) continue;
            ++counts[token];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

TopicDataset slice_topic(const std::vector<Tweet>& tweets, std::string_view seed, std::string_view sub,
                         EpochMs window_start, EpochMs window_end, Genre genre) {
    if (!(window_start < window_end)) throw ArgumentError("slice_topic: window_start must precede window_end");
    TopicDataset ds;
    ds.seed_keyword = std::string(seed);
    ds.sub_keyword = std::string(sub);
    ds.window_start = window_start;
    ds.window_end = window_end;
    ds.genre = genre;
    const std::string fs = case_fold(seed);
    const std::string fk = case_fold(sub);
    for (const Tweet& t : tweets) {
        if (t.created_at < window_start || t.created_at > window_end) continue;
        const std::string text = case_fold(t.text);
        if (contains_folded(text, fs) && contains_folded(text, fk)) ds.tweets.push_back(t);
    }
    std::sort(ds.tweets.begin(), ds.tweets.end(), tweet_time_less);
    return ds;
}

// ---------------------------------------------------------------------------
// seed selection

namespace {

struct SparseVec {
    std::vector<std::pair<std::uint32_t, double>> terms; // sorted by term id
    double norm2 = 0.0;
};

double sq_distance(const SparseVec& x, const std::vector<double>& centroid, double centroid_norm2) {
    double dot = 0.0;
    for (const auto& [term, value] : x.terms) dot += value * centroid[term];
    return std::max(0.0, x.norm2 - 2.0 * dot + centroid_norm2);
}

double sq_distance(const SparseVec& x, const SparseVec& y) {
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.terms.size() || j < y.terms.size()) {
        if (j == y.terms.size() || (i < x.terms.size() && x.terms[i].first < y.terms[j].first)) {
            d += x.terms[i].second * x.terms[i].second;
            ++i;
        } else if (i == x.terms.size() || y.terms[j].first < x.terms[i].first) {
            d += y.terms[j].second * y.terms[j].second;
            ++j;
        } else {
            const double diff = x.terms[i].second - y.terms[j].second;
            d += diff * diff;
            ++i;
            ++j;
        }
    }
    return d;
}

void set_dense(std::vector<double>& centroid, const SparseVec& x) {
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (const auto& [term, value] : x.terms) centroid[term] = value;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace

SeedSelection seed_select(const std::vector<NewsArticle>& corpus, std::size_t k, const Tokenizer& tokenizer,
                          std::uint64_t seed_rng, const KMeansOptions& options) {
    if (corpus.empty()) throw ArgumentError("seed_select: corpus is empty");
    if (k == 0 || k > corpus.size()) {
        throw ArgumentError("seed_select: k must be in [1, corpus size]; got k=" + std::to_string(k) +
                            " for " + std::to_string(corpus.size()) + " articles");
    }
    const std::size_t n = corpus.size();

    std::unordered_map<std::string, std::uint32_t> vocab;
    std::vector<SparseVec> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (corpus[i].title.empty()) throw ArgumentError("seed_select: article " + std::to_string(i) + " has an empty title");
        std::map<std::uint32_t, double> bag;
        for (auto& token : tokenizer.tokenize(corpus[i].title)) {
            auto [it, inserted] = vocab.emplace(std::move(token), static_cast<std::uint32_t>(vocab.size()));
            bag[it->second] += 1.0;
        }
        points[i].terms.assign(bag.begin(), bag.end());
        for (const auto& [term, value] : points[i].terms) points[i].norm2 += value * value;
    }
    const std::size_t dims = vocab.size();

    SeedSelection out;
    out.vocabulary_size = dims;

    // k-means++ seeding
    Rng rng(seed_rng);
    std::vector<std::size_t> chosen;
    std::vector<bool> is_chosen(n, false);
    chosen.push_back(static_cast<std::size_t>(rng.index(n)));
    is_chosen[chosen.back()] = true;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_distance(points[i], points[chosen[0]]);
    while (chosen.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += is_chosen[i] ? 0.0 : d2[i];
        std::size_t pick = n;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                if (is_chosen[i] || d2[i] == 0.0) continue;
                pick = i;
                r -= d2[i];
                if (r < 0.0) break;
            }
        } else {
            // every remaining point duplicates a chosen one
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_chosen[i]) rest.push_back(i);
            }
            pick = rest[rng.index(rest.size())];
        }
        chosen.push_back(pick);
        is_chosen[pick] = true;
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_distance(points[i], points[pick]));
    }

    std::vector<std::vector<double>> centroids(k, std::vector<double>(dims, 0.0));
    std::vector<double> cnorm(k);
    for (std::size_t c = 0; c < k; ++c) {
        set_dense(centroids[c], points[chosen[c]]);
        cnorm[c] = points[chosen[c]].norm2;
    }

    std::vector<std::size_t> assign(n, 0);
    std::vector<double> dist(n, 0.0);
    auto assign_all = [&] {
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_distance(points[i], centroids[c], cnorm[c]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            assign[i] = best_c;
            dist[i] = best;
            objective += best;
        }
        return objective;
    };

    // Moves the worst-fitting point of a multi-member cluster into each empty cluster.
    auto fill_empty = [&](std::vector<std::size_t>& sizes) {
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t victim = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[assign[i]] < 2) continue;
                if (victim == n || dist[i] > dist[victim]) victim = i;
            }
            RTPOL_CHECK(victim != n, "k <= n guarantees a donor cluster");
            --sizes[assign[victim]];
            assign[victim] = c;
            dist[victim] = 0.0;
            ++sizes[c];
            set_dense(centroids[c], points[victim]);
            cnorm[c] = points[victim].norm2;
        }
    };

    std::vector<std::size_t> sizes(k);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        out.objective_history.push_back(assign_all());
        ++out.iterations;

        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++sizes[assign[i]];

        double max_shift = 0.0;
        std::vector<std::vector<double>> updated(k, std::vector<double>(dims, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [term, value] : points[i].terms) updated[assign[i]][term] += value;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            double shift = 0.0;
            for (std::size_t d = 0; d < dims; ++d) {
                updated[c][d] /= static_cast<double>(sizes[c]);
                const double diff = updated[c][d] - centroids[c][d];
                shift += diff * diff;
            }
            max_shift = std::max(max_shift, std::sqrt(shift));
            centroids[c].swap(updated[c]);
            cnorm[c] = norm2(centroids[c]);
        }
        if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
            // distances against the refreshed centroids before choosing donors
            for (std::size_t i = 0; i < n; ++i) dist[i] = sq_distance(points[i], centroids[assign[i]], cnorm[assign[i]]);
            fill_empty(sizes);
            max_shift = std::numeric_limits<double>::infinity();
        }
        if (max_shift < options.tolerance) break;
    }

    assign_all();
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[assign[i]];
    fill_empty(sizes);

    out.cluster_sizes = sizes;
    out.representative_index.assign(k, n);
    std::vector<double> best(k, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = assign[i];
        const double d = sq_distance(points[i], centroids[c], cnorm[c]);
        if (d < best[c]) {
            best[c] = d;
            out.representative_index[c] = i;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        RTPOL_CHECK(out.representative_index[c] < n, "every cluster has a member");
        out.representatives.push_back(corpus[out.representative_index[c]]);
    }
    return out;
}

std::vector<NewsArticle> load_news(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read news file: " + path);
    std::vector<NewsArticle> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("title") || !j["title"].is_string()) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": expected an object with a string title");
        }
        NewsArticle a;
        a.title = j["title"].get<std::string>();
        if (j.contains("genre") && j["genre"].is_string()) a.genre = parse_genre(j["genre"].get<std::string>());
        if (j.contains("published_at")) {
            auto t = as_epoch(&j["published_at"]);
            if (!t) throw SchemaError(path + ":" + std::to_string(line_no) + ": bad published_at");
            a.published_at = *t;
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace rtpol
