#include "rtpol/topic_store.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "rtpol/error.hpp"

namespace rtpol {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kManifestVersion = 1;

std::string sanitize(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        const bool safe = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-' ||
                          c == '.' || c >= 0x80;
        out.push_back(safe ? static_cast<char>(c) : '_');
    }
    if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
    return out;
}

} // namespace

std::string topic_id_for(const TopicDataset& dataset) {
    return sanitize(dataset.seed_keyword) + "__" + sanitize(dataset.sub_keyword);
}

std::vector<TopicEntry> write_topics(const std::string& dir, const std::vector<TopicDataset>& topics) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create topic directory " + dir + ": " + ec.message());

    std::vector<TopicEntry> entries;
    std::set<std::string> used;
    ordered_json manifest;
    manifest["version"] = kManifestVersion;
    manifest["topics"] = ordered_json::array();
    for (const TopicDataset& t : topics) {
        TopicEntry e;
        e.topic_id = topic_id_for(t);
        for (int n = 2; used.count(e.topic_id) != 0; ++n) e.topic_id = topic_id_for(t) + "_" + std::to_string(n);
        used.insert(e.topic_id);
        e.seed_keyword = t.seed_keyword;
        e.sub_keyword = t.sub_keyword;
        e.window_start = t.window_start;
        e.window_end = t.window_end;
        e.genre = t.genre;
        e.tweet_count = t.tweets.size();
        for (const Tweet& tw : t.tweets) e.retweet_count += tw.is_retweet() ? 1 : 0;

        const fs::path file = fs::path(dir) / (e.topic_id + ".jsonl");
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + file.string());
        for (const Tweet& tw : t.tweets) out << tweet_to_json_line(tw) << '\n';
        if (!out) throw IoError("write failed: " + file.string());

        manifest["topics"].push_back({{"topic_id", e.topic_id},
                                      {"seed", e.seed_keyword},
                                      {"sub", e.sub_keyword},
                                      {"window_start", e.window_start},
                                      {"window_end", e.window_end},
                                      {"genre", std::string(genre_name(e.genre))},
                                      {"tweets", e.tweet_count},
                                      {"retweets", e.retweet_count}});
        entries.push_back(std::move(e));
    }
    const fs::path mpath = fs::path(dir) / "manifest.json";
    std::ofstream mout(mpath, std::ios::binary | std::ios::trunc);
    if (!mout) throw IoError("cannot write " + mpath.string());
    mout << manifest.dump(2) << '\n';
    return entries;
}

std::vector<TopicEntry> read_manifest(const std::string& dir) {
    const fs::path mpath = fs::path(dir) / "manifest.json";
    std::ifstream in(mpath, std::ios::binary);
    if (!in) throw IoError("cannot read " + mpath.string());
    std::vector<TopicEntry> entries;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.value("version", 0) != kManifestVersion) throw SchemaError("unsupported manifest version in " + mpath.string());
        for (const auto& j : doc.at("topics")) {
            TopicEntry e;
            e.topic_id = j.at("topic_id").get<std::string>();
            e.seed_keyword = j.at("seed").get<std::string>();
            e.sub_keyword = j.at("sub").get<std::string>();
            e.window_start = j.at("window_start").get<EpochMs>();
            e.window_end = j.at("window_end").get<EpochMs>();
            e.genre = parse_genre(j.at("genre").get<std::string>());
            e.tweet_count = j.at("tweets").get<std::size_t>();
            e.retweet_count = j.value("retweets", std::size_t{0});
            entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError("malformed manifest " + mpath.string() + ": " + ex.what());
    }
    return entries;
}

std::vector<StoredTopic> read_topics(const std::string& dir) {
    std::vector<StoredTopic> out;
    for (TopicEntry& e : read_manifest(dir)) {
        const fs::path file = fs::path(dir) / (e.topic_id + ".jsonl");
        ParseReport report = parse_dump(file.string());
        if (report.malformed != 0 || report.tweets.size() != e.tweet_count) {
            throw SchemaError("topic file " + file.string() + " does not match its manifest entry");
        }
        StoredTopic st;
        st.dataset.seed_keyword = e.seed_keyword;
        st.dataset.sub_keyword = e.sub_keyword;
        st.dataset.window_start = e.window_start;
        st.dataset.window_end = e.window_end;
        st.dataset.genre = e.genre;
        st.dataset.tweets = std::move(report.tweets);
        st.entry = std::move(e);
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace rtpol
