#include "rtpol/features.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include "rtpol/error.hpp"

namespace rtpol {

std::array<double, kGenreCount> TopicFeatures::genre_one_hot() const {
    std::array<double, kGenreCount> v{};
    v[static_cast<std::size_t>(genre)] = 1.0;
    return v;
}

std::pair<double, double> url_hashtag_ratios(const TopicDataset& dataset) {
    if (dataset.tweets.empty()) throw FeatureError("url_hashtag_ratios: dataset has no tweets");
    std::size_t with_url = 0, with_tag = 0;
    for (const Tweet& t : dataset.tweets) {
        with_url += t.urls.empty() ? 0 : 1;
        with_tag += t.hashtags.empty() ? 0 : 1;
    }
    const auto n = static_cast<double>(dataset.tweets.size());
    return {static_cast<double>(with_url) / n, static_cast<double>(with_tag) / n};
}

double vocal_minority(const TopicDataset& dataset) {
    if (dataset.tweets.empty()) throw FeatureError("vocal_minority: dataset has no tweets");
    std::map<std::string, std::size_t> per_author;
    for (const Tweet& t : dataset.tweets) ++per_author[t.author_id];
    std::vector<std::pair<std::string, std::size_t>> ranked(per_author.begin(), per_author.end());
    // map order gives id ascending; stable sort keeps it as the tie-break
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    const std::size_t total = dataset.tweets.size();
    const std::size_t half = (total + 1) / 2;
    std::size_t cumulative = 0, prefix = 0;
    for (const auto& entry : ranked) {
        cumulative += entry.second;
        ++prefix;
        if (cumulative >= half) break;
    }
    return static_cast<double>(prefix) / static_cast<double>(ranked.size());
}

TopicFeatures assemble_features(const TopicDataset& dataset, const RetweetNetwork& network,
                                const std::optional<PolarizationResult>& naive_result) {
    TopicFeatures f;
    f.genre = dataset.genre;
    f.tweet_count = dataset.tweets.size();
    std::tie(f.url_ratio, f.hashtag_ratio) = url_hashtag_ratios(dataset);
    f.vocal_minority_index = vocal_minority(dataset);
    if (!network.empty()) {
        const NetworkStats s = stats(network);
        f.network_size = s.node_count;
        f.average_degree = s.average_degree;
    }
    if (naive_result) f.naive_phi_hat = naive_result->phi_hat;
    return f;
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    for (Genre g : kAllGenres) out.push_back("genre_" + std::string(genre_name(g)));
    out.emplace_back("network_size");
    if (average_degree) out.emplace_back("average_degree");
    out.emplace_back("url_ratio");
    out.emplace_back("hashtag_ratio");
    out.emplace_back("vocal_minority_index");
    if (naive_phi_hat) out.emplace_back("naive_phi_hat");
    return out;
}

std::vector<double> FeatureSchema::encode(const TopicFeatures& f) const {
    std::vector<double> x;
    const auto hot = f.genre_one_hot();
    x.insert(x.end(), hot.begin(), hot.end());
    x.push_back(static_cast<double>(f.network_size));
    if (average_degree) x.push_back(f.average_degree);
    x.push_back(f.url_ratio);
    x.push_back(f.hashtag_ratio);
    x.push_back(f.vocal_minority_index);
    if (naive_phi_hat) {
        if (!f.naive_phi_hat) throw PredictionError("feature schema expects naive_phi_hat but the row has none");
        x.push_back(*f.naive_phi_hat);
    }
    return x;
}

std::vector<std::string> features_csv_header() {
    std::vector<std::string> h = {"topic_id", "genre"};
    for (Genre g : kAllGenres) h.push_back("genre_" + std::string(genre_name(g)));
    for (const char* c : {"network_size", "average_degree", "url_ratio", "hashtag_ratio", "vocal_minority_index",
                          "tweet_count", "naive_phi_hat", "phi_hat", "is_polarized"}) {
        h.emplace_back(c);
    }
    return h;
}

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
    write_csv_row(out, features_csv_header());
    for (const FeatureRow& r : rows) {
        std::vector<std::string> cells = {r.topic_id, std::string(genre_name(r.features.genre))};
        for (double h : r.features.genre_one_hot()) cells.push_back(h == 1.0 ? "1" : "0");
        cells.push_back(std::to_string(r.features.network_size));
        cells.push_back(format_number(r.features.average_degree));
        cells.push_back(format_number(r.features.url_ratio));
        cells.push_back(format_number(r.features.hashtag_ratio));
        cells.push_back(format_number(r.features.vocal_minority_index));
        cells.push_back(std::to_string(r.features.tweet_count));
        cells.push_back(format_optional(r.features.naive_phi_hat));
        cells.push_back(format_optional(r.phi_hat));
        cells.push_back(r.is_polarized ? (*r.is_polarized ? "1" : "0") : "");
        write_csv_row(out, cells);
    }
}

std::vector<FeatureRow> read_features_csv(const CsvTable& table) {
    const std::size_t c_id = table.column("topic_id");
    const std::size_t c_size = table.column("network_size");
    const std::size_t c_url = table.column("url_ratio");
    const std::size_t c_tag = table.column("hashtag_ratio");
    const std::size_t c_vm = table.column("vocal_minority_index");
    const bool has_genre_label = table.has_column("genre");
    std::vector<std::size_t> c_hot;
    if (!has_genre_label) {
        for (Genre g : kAllGenres) c_hot.push_back(table.column("genre_" + std::string(genre_name(g))));
    }
    auto optional_col = [&](std::string_view name) -> std::optional<std::size_t> {
        if (!table.has_column(name)) return std::nullopt;
        return table.column(name);
    };
    const auto c_deg = optional_col("average_degree");
    const auto c_count = optional_col("tweet_count");
    const auto c_naive = optional_col("naive_phi_hat");
    const auto c_target = optional_col("phi_hat");
    const auto c_pol = optional_col("is_polarized");

    std::vector<FeatureRow> rows;
    for (const auto& cells : table.rows) {
        FeatureRow r;
        r.topic_id = cells[c_id];
        TopicFeatures& f = r.features;
        if (has_genre_label) {
            f.genre = parse_genre(cells[table.column("genre")]);
        } else {
            std::size_t active = 0;
            for (std::size_t g = 0; g < kGenreCount; ++g) {
                if (parse_double(cells[c_hot[g]], "genre one-hot") == 1.0) {
                    f.genre = kAllGenres[g];
                    ++active;
                }
            }
            if (active != 1) throw SchemaError("row " + r.topic_id + ": genre one-hot must have exactly one active column");
        }
        f.network_size = static_cast<std::size_t>(parse_double(cells[c_size], "network_size"));
        f.url_ratio = parse_double(cells[c_url], "url_ratio");
        f.hashtag_ratio = parse_double(cells[c_tag], "hashtag_ratio");
        f.vocal_minority_index = parse_double(cells[c_vm], "vocal_minority_index");
        if (c_deg && !cells[*c_deg].empty()) f.average_degree = parse_double(cells[*c_deg], "average_degree");
        if (c_count && !cells[*c_count].empty()) f.tweet_count = static_cast<std::size_t>(parse_double(cells[*c_count], "tweet_count"));
        if (c_naive && !cells[*c_naive].empty()) f.naive_phi_hat = parse_double(cells[*c_naive], "naive_phi_hat");
        if (c_target && !cells[*c_target].empty()) r.phi_hat = parse_double(cells[*c_target], "phi_hat");
        if (c_pol && !cells[*c_pol].empty()) r.is_polarized = cells[*c_pol] == "1" || cells[*c_pol] == "true";
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace rtpol
