#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtpol/forest.hpp"
#include "rtpol/graph.hpp"
#include "rtpol/ingest.hpp"
#include "rtpol/polarization.hpp"
#include "rtpol/sampler.hpp"

namespace rtpol::app {

struct SeedKeyword {
    std::string keyword;
    Genre genre = Genre::International;
    EpochMs window_start = 0;

    friend bool operator==(const SeedKeyword&, const SeedKeyword&) = default;
};

struct RunConfig {
    // inputs
    std::string dump_path;
    std::string news_path;
    DumpSchema schema;
    std::vector<SeedKeyword> seeds;

    // tokenizer
    std::string stopwords_path; ///< empty: built-in list
    std::size_t min_token_length = 2;

    std::size_t subkeywords = 10;
    double window_hours = 12.0;
    ViabilityThresholds viability;
    PolarizationConfig polarization;

    std::vector<std::size_t> k_values = {10, 20, 40, 80, 160, 320};
    std::size_t m = 100;
    std::size_t trials = 10;
    int hour_buckets = 12;

    ForestConfig forest;
    std::size_t folds = 10;
    bool feature_average_degree = false;
    bool feature_naive_phi_hat = false;

    std::size_t seed_articles = 100;

    std::uint64_t seed = 0;
    std::string output_dir = "out";

    std::string topics_dir() const { return output_dir + "/topics"; }
    FeatureSchema feature_schema() const { return {feature_average_degree, feature_naive_phi_hat}; }
    EpochMs window_ms() const { return static_cast<EpochMs>(window_hours * static_cast<double>(kHourMs)); }
};

/// Canonical JSON text of the configuration (every field, fixed key order).
std::string to_json(const RunConfig& config);

/// Parses a configuration. Missing keys keep their defaults; unknown keys and
/// wrongly typed values raise ArgumentError.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

/// Hash of the canonical JSON without the output directory, as 16 hex digits.
std::string config_hash(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

} // namespace rtpol::app
