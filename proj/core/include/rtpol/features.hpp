#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtpol/csv.hpp"
#include "rtpol/graph.hpp"
#include "rtpol/ingest.hpp"
#include "rtpol/polarization.hpp"

namespace rtpol {

struct TopicFeatures {
    Genre genre = Genre::International;
    std::size_t network_size = 0;
    double average_degree = 0.0;
    double url_ratio = 0.0;
    double hashtag_ratio = 0.0;
    double vocal_minority_index = 0.0;
    std::size_t tweet_count = 0;
    std::optional<double> naive_phi_hat;

    std::array<double, kGenreCount> genre_one_hot() const;
};

/// Fractions of tweets (retweets included) carrying at least one URL / hashtag.
/// Throws FeatureError on an empty dataset.
std::pair<double, double> url_hashtag_ratios(const TopicDataset& dataset);

/// Smallest share of distinct authors whose tweets reach ceil(half) of the topic
/// volume, taking the most active authors first.
double vocal_minority(const TopicDataset& dataset);

/// Fills every feature. An empty network (possible for sampled subsets in
/// prediction mode) yields network_size 0 and average_degree 0.
TopicFeatures assemble_features(const TopicDataset& dataset, const RetweetNetwork& network,
                                const std::optional<PolarizationResult>& naive_result = std::nullopt);

/// Ordered model inputs. The default is genre one-hot, network size, URL ratio,
/// hashtag ratio and vocal minority index.
struct FeatureSchema {
    bool average_degree = false;
    bool naive_phi_hat = false;

    std::vector<std::string> names() const;
    std::vector<double> encode(const TopicFeatures& f) const;
    std::size_t width() const { return names().size(); }
};

struct FeatureRow {
    std::string topic_id;
    TopicFeatures features;
    std::optional<double> phi_hat;
    std::optional<bool> is_polarized;
};

/// Column order of the features table.
std::vector<std::string> features_csv_header();
void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(const CsvTable& table);

} // namespace rtpol
