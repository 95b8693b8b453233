#pragma once

#include <string>
#include <vector>

#include "rtpol/ingest.hpp"

namespace rtpol {

/// One manifest entry. topic_id names the per-topic tweets file.
struct TopicEntry {
    std::string topic_id;
    std::string seed_keyword;
    std::string sub_keyword;
    EpochMs window_start = 0;
    EpochMs window_end = 0;
    Genre genre = Genre::International;
    std::size_t tweet_count = 0;
    std::size_t retweet_count = 0;
};

/// Stable identifier "<seed>__<sub>" with path-unsafe bytes replaced by '_'.
std::string topic_id_for(const TopicDataset& dataset);

/// Writes manifest.json plus one <topic_id>.jsonl per topic into dir (created if
/// needed). Returns the manifest entries in input order.
std::vector<TopicEntry> write_topics(const std::string& dir, const std::vector<TopicDataset>& topics);

std::vector<TopicEntry> read_manifest(const std::string& dir);

struct StoredTopic {
    TopicEntry entry;
    TopicDataset dataset;
};

/// Reads every topic listed in the manifest. Throws SchemaError if a topic file
/// is malformed or its tweet count disagrees with the manifest.
std::vector<StoredTopic> read_topics(const std::string& dir);

} // namespace rtpol
