#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rtpol/ingest.hpp"
#include "rtpol/random.hpp"

namespace rtpol::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "rtpol") {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        for (;;) {
            path_ = base / (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
            if (std::filesystem::create_directories(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Tweet original(std::string id, std::string author, EpochMs t, std::string text = "topic") {
    Tweet tw;
    tw.id = std::move(id);
    tw.author_id = std::move(author);
    tw.created_at = t;
    tw.text = std::move(text);
    return tw;
}

inline Tweet retweet(std::string id, std::string author, std::string of_author, EpochMs t,
                     std::string text = "topic") {
    Tweet tw = original(std::move(id), std::move(author), t, std::move(text));
    tw.retweet_of_author = std::move(of_author);
    tw.retweet_of_tweet = "orig_" + *tw.retweet_of_author;
    return tw;
}

/// Dataset over [0, 12h] with the given tweets (sorted by the caller's times).
inline TopicDataset dataset_of(std::vector<Tweet> tweets, EpochMs start = 0, EpochMs end = 12 * kHourMs) {
    TopicDataset d;
    d.seed_keyword = "topic";
    d.sub_keyword = "topic";
    d.window_start = start;
    d.window_end = end;
    d.tweets = std::move(tweets);
    return d;
}

} // namespace rtpol::test
