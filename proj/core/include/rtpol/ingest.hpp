#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtpol/tokenizer.hpp"

namespace rtpol {

using EpochMs = std::int64_t;

inline constexpr EpochMs kHourMs = 3'600'000;

enum class Genre : std::uint8_t {
    International,
    Politics,
    Business,
    Social,
    Sports,
    ScienceCulture,
    Life,
    WeatherDisaster,
};

inline constexpr std::size_t kGenreCount = 8;

inline constexpr std::array<Genre, kGenreCount> kAllGenres = {
    Genre::International, Genre::Politics, Genre::Business,       Genre::Social,
    Genre::Sports,        Genre::ScienceCulture, Genre::Life, Genre::WeatherDisaster,
};

/// Display names: "International", "Politics", ..., "Science·Culture", "Weather·Disaster".
std::string_view genre_name(Genre g);

/// Accepts the display name or an ASCII alias ("Science-Culture", "ScienceCulture",
/// case-insensitive). Throws ArgumentError on unknown labels.
Genre parse_genre(std::string_view label);

struct Tweet {
    std::string id;
    std::string author_id;
    EpochMs created_at = 0;
    std::string text;
    std::optional<std::string> retweet_of_author;
    std::optional<std::string> retweet_of_tweet;
    std::vector<std::string> urls;
    std::vector<std::string> hashtags;

    bool is_retweet() const { return retweet_of_author.has_value(); }

    friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// Ordering used by every dataset: created_at ascending, then id ascending.
bool tweet_time_less(const Tweet& a, const Tweet& b);

struct TopicDataset {
    std::string seed_keyword;
    std::string sub_keyword;
    EpochMs window_start = 0;
    EpochMs window_end = 0;
    std::vector<Tweet> tweets;
    Genre genre = Genre::International;

    friend bool operator==(const TopicDataset&, const TopicDataset&) = default;
};

struct NewsArticle {
    std::string title;
    Genre genre = Genre::International;
    EpochMs published_at = 0;
};

/// Field names (dotted paths allowed, e.g. "user.id") of each Tweet field in the
/// dump records. Optional fields that are absent from a record read as empty.
struct DumpSchema {
    std::string id = "id";
    std::string author_id = "author_id";
    std::string created_at = "created_at";
    std::string text = "text";
    std::string retweet_of_author = "retweet_of_author";
    std::string retweet_of_tweet = "retweet_of_tweet";
    std::string urls = "urls";
    std::string hashtags = "hashtags";
};

struct ParseReport {
    std::vector<Tweet> tweets;
    std::size_t malformed = 0;
    std::size_t lines = 0; ///< non-blank lines seen
    std::vector<std::size_t> malformed_lines; ///< 1-based line numbers
};

/// Parses a line-delimited JSON dump. Malformed lines are counted; more than half
/// malformed raises SchemaError quoting an offending line.
ParseReport parse_dump(const std::string& path, const DumpSchema& schema = {});

/// Same as parse_dump but over in-memory lines (used by tests and tools).
ParseReport parse_dump_lines(const std::vector<std::string>& lines, const DumpSchema& schema = {},
                             std::string_view source = "<memory>");

/// Serializes a tweet as one dump line using the default schema field names.
std::string tweet_to_json_line(const Tweet& t);

struct SubkeywordOptions {
    std::size_t min_token_length = 2; ///< in code points
};

/// Top-k tokens by total occurrence count, excluding the seed, stopwords and
/// short tokens. Ordered by frequency descending, then token ascending.
std::vector<std::pair<std::string, std::size_t>> mine_subkeywords(const std::vector<Tweet>& tweets,
                                                                  std::string_view seed, std::size_t k,
                                                                  const Tokenizer& tokenizer,
                                                                  const StopwordSet& stopwords,
                                                                  const SubkeywordOptions& options = {});

/// Tweets whose text contains both keywords (case-folded substring) and whose
/// created_at lies in [window_start, window_end], sorted by tweet_time_less.
TopicDataset slice_topic(const std::vector<Tweet>& tweets, std::string_view seed, std::string_view sub,
                         EpochMs window_start, EpochMs window_end, Genre genre);

struct SeedSelection {
    std::vector<NewsArticle> representatives; ///< one per cluster, cluster order
    std::vector<std::size_t> representative_index; ///< corpus index of each representative
    std::vector<std::size_t> cluster_sizes;
    std::vector<double> objective_history; ///< sum of squared distances after each Lloyd iteration
    std::size_t vocabulary_size = 0;
    std::size_t iterations = 0;
};

struct KMeansOptions {
    std::size_t max_iterations = 100;
    double tolerance = 1e-6; ///< stop when max centroid shift falls below this
};

/// Bag-of-words KMeans (k-means++ seeding, Lloyd iterations) over news titles;
/// returns the article nearest each centroid (ties: lowest corpus index).
SeedSelection seed_select(const std::vector<NewsArticle>& corpus, std::size_t k, const Tokenizer& tokenizer,
                          std::uint64_t seed_rng, const KMeansOptions& options = {});

/// Loads news articles from a JSON-lines file with fields title, genre, published_at.
std::vector<NewsArticle> load_news(const std::string& path);

} // namespace rtpol
