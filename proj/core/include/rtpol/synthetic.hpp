#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rtpol/graph.hpp"
#include "rtpol/ingest.hpp"

namespace rtpol::synth {

enum class StreamKind : std::uint8_t {
    Polarized,    ///< two communities retweeting mostly in-group
    Preferential, ///< popularity-driven retweeting with no group structure
    Star,         ///< one account absorbs most retweets
};

std::string_view stream_kind_name(StreamKind kind);

struct StreamParams {
    StreamKind kind = StreamKind::Polarized;
    std::size_t tweets = 3000;
    double in_group = 0.9;       ///< Polarized: share of retweets inside the retweeter's community
    double community_share = 0.5; ///< Polarized: size share of the first community
    double url_rate = 0.3;
    double hashtag_rate = 0.2;
    double activity_skew = 0.8;  ///< Zipf exponent of retweeter activity
    double decay_hours = 6.0;    ///< time constant of the decaying tweet rate
    double original_share = 0.06;
    double mean_retweets_per_user = 6.0;
};

/// Generates one topic stream inside [window_start, window_start + 12h]. Every
/// tweet text contains both keywords. User ids are prefixed with `user_prefix`,
/// tweet ids with `id_prefix`.
TopicDataset generate_stream(const StreamParams& params, const std::string& seed_keyword,
                             const std::string& sub_keyword, Genre genre, EpochMs window_start,
                             const std::string& id_prefix, const std::string& user_prefix, std::uint64_t rng_seed);

struct SeedSpec {
    std::string keyword;
    Genre genre = Genre::International;
    EpochMs window_start = 0;
};

struct PlantedTopic {
    std::string seed_keyword;
    std::string sub_keyword;
    Genre genre = Genre::International;
    EpochMs window_start = 0;
    EpochMs window_end = 0;
    StreamKind kind = StreamKind::Polarized;
    bool polarized = false;
    std::size_t tweets = 0;
};

struct CorpusOptions {
    std::size_t seeds = 6;          ///< at most 6 built-in seeds
    std::size_t subs_per_seed = 10; ///< at most 10
    /// Planted-polarized topics per seed, in seed order.
    std::vector<std::size_t> polarized_per_seed = {8, 7, 6, 4, 3, 2};
    std::size_t min_tweets = 4000;
    std::size_t max_tweets = 25000;
    EpochMs base_time = 1'700'000'000'000;
    double out_of_window_share = 0.01; ///< keyword tweets outside the window (dropped by slicing)
    std::uint64_t rng_seed = 0;
};

struct Corpus {
    std::vector<Tweet> tweets; ///< the raw dump, sorted by time
    std::vector<SeedSpec> seeds;
    std::vector<PlantedTopic> topics;
};

/// Builds a dump of seeds x subs topic streams with planted labels. With the
/// defaults: 60 topics, 30 planted-polarized, the rest split between
/// preferential and star streams.
Corpus generate_corpus(const CorpusOptions& options = {});

/// The built-in seed keywords and their sub-keywords.
const std::vector<std::pair<SeedSpec, std::vector<std::string>>>& builtin_topics();

/// Directed G(n, M): `edges` distinct non-loop pairs chosen uniformly.
RetweetNetwork erdos_renyi(std::size_t n, std::size_t edges, std::uint64_t rng_seed);

/// Hub "0" with an edge to each of `leaves` nodes.
RetweetNetwork star(std::size_t leaves);

/// Two dense directed groups of `group` nodes (edge probability p_in inside)
/// plus `bridges` random cross edges. Nodes [0, group) form the first group.
RetweetNetwork planted_pair(std::size_t group, double p_in, std::size_t bridges, std::uint64_t rng_seed);

/// Directed graph over n nodes with independent edge probability p.
RetweetNetwork random_directed(std::size_t n, double p, std::uint64_t rng_seed);

} // namespace rtpol::synth
