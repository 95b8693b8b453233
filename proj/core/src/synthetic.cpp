#include "rtpol/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "rtpol/error.hpp"
#include "rtpol/random.hpp"
#include "rtpol/tokenizer.hpp"

namespace rtpol::synth {

std::string_view stream_kind_name(StreamKind kind) {
    switch (kind) {
    case StreamKind::Polarized: return "polarized";
    case StreamKind::Preferential: return "preferential";
    case StreamKind::Star: return "star";
    }
    return "unknown";
}

namespace {

/// Sampler over fixed weights via prefix sums.
class WeightedPick {
public:
    explicit WeightedPick(const std::vector<double>& weights) : prefix_(weights.size()) {
        std::partial_sum(weights.begin(), weights.end(), prefix_.begin());
    }
    std::size_t operator()(Rng& rng) const {
        const double u = rng.uniform() * prefix_.back();
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
        return std::min(static_cast<std::size_t>(it - prefix_.begin()), prefix_.size() - 1);
    }

private:
    std::vector<double> prefix_;
};

std::vector<double> zipf_weights(std::size_t n, double exponent) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    return w;
}

double event_hour(Rng& rng, double decay_hours) {
    constexpr double span = 12.0;
    if (rng.bernoulli(0.25)) return rng.uniform(0.0, span);
    // truncated exponential on [0, span)
    const double tail = 1.0 - std::exp(-span / decay_hours);
    return -decay_hours * std::log(1.0 - rng.uniform() * tail);
}

std::string tweet_text(Rng& rng, const std::string& seed, const std::string& sub) {
    const auto& fillers = default_stopword_list();
    std::vector<std::string> words;
    std::string s = seed;
    if (rng.bernoulli(0.3)) s[0] = static_cast<char>(s[0] - 'a' + 'A');
    words.push_back(s);
    words.push_back(sub);
    const std::size_t extra = 3 + rng.index(6);
    for (std::size_t i = 0; i < extra; ++i) words.push_back(fillers[rng.index(fillers.size())]);
    rng.shuffle(words);
    std::string text;
    for (const auto& w : words) {
        if (!text.empty()) text += ' ';
        text += w;
    }
    if (rng.bernoulli(0.3)) text += rng.bernoulli(0.5) ? "!" : "?";
    return text;
}

} // namespace

TopicDataset generate_stream(const StreamParams& params, const std::string& seed_keyword,
                             const std::string& sub_keyword, Genre genre, EpochMs window_start,
                             const std::string& id_prefix, const std::string& user_prefix, std::uint64_t rng_seed) {
    if (params.tweets == 0) throw ArgumentError("generate_stream: tweets must be positive");
    Rng rng(rng_seed);
    TopicDataset ds;
    ds.seed_keyword = seed_keyword;
    ds.sub_keyword = sub_keyword;
    ds.genre = genre;
    ds.window_start = window_start;
    ds.window_end = window_start + 12 * kHourMs;

    const auto users = std::max<std::size_t>(
        20, static_cast<std::size_t>(static_cast<double>(params.tweets) / params.mean_retweets_per_user));

    // influencer ids per community (Preferential and Star use community 0 only)
    const bool polarized = params.kind == StreamKind::Polarized;
    const std::size_t groups = polarized ? 2 : 1;
    std::vector<std::size_t> pool_size(groups), influencer_count(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const double share = !polarized ? 1.0 : (g == 0 ? params.community_share : 1.0 - params.community_share);
        pool_size[g] = std::max<std::size_t>(10, static_cast<std::size_t>(static_cast<double>(users) * share));
        influencer_count[g] = std::max<std::size_t>(4, static_cast<std::size_t>(std::sqrt(static_cast<double>(pool_size[g]))));
    }
    if (params.kind == StreamKind::Star) influencer_count[0] = std::max<std::size_t>(2, influencer_count[0] / 3);

    auto influencer_id = [&](std::size_t g, std::size_t i) {
        return user_prefix + "i" + std::to_string(g) + "_" + std::to_string(i);
    };
    auto retweeter_id = [&](std::size_t g, std::size_t i) {
        return user_prefix + "r" + std::to_string(g) + "_" + std::to_string(i);
    };

    std::vector<WeightedPick> pick_retweeter, pick_influencer;
    for (std::size_t g = 0; g < groups; ++g) {
        pick_retweeter.emplace_back(zipf_weights(pool_size[g], params.activity_skew));
        std::vector<double> w = zipf_weights(influencer_count[g], 1.0);
        if (params.kind == StreamKind::Star) {
            const double rest = std::accumulate(w.begin() + 1, w.end(), 0.0);
            for (std::size_t i = 1; i < w.size(); ++i) w[i] *= 0.15 / rest;
            w[0] = 0.85;
        }
        pick_influencer.emplace_back(w);
    }
    const WeightedPick pick_group(std::vector<double>{params.community_share, 1.0 - params.community_share});

    std::vector<double> hours(params.tweets);
    for (double& h : hours) h = event_hour(rng, params.decay_hours);
    std::sort(hours.begin(), hours.end());

    std::vector<std::vector<std::string>> latest_original(groups);
    for (std::size_t g = 0; g < groups; ++g) latest_original[g].resize(influencer_count[g]);
    std::vector<double> popularity(influencer_count[0], 1.0); // Preferential only

    ds.tweets.reserve(params.tweets);
    for (std::size_t e = 0; e < params.tweets; ++e) {
        Tweet t;
        t.id = id_prefix + std::to_string(e);
        t.created_at = window_start + static_cast<EpochMs>(hours[e] * static_cast<double>(kHourMs));
        t.created_at = std::min(t.created_at, ds.window_end);
        t.text = tweet_text(rng, seed_keyword, sub_keyword);
        if (rng.bernoulli(params.url_rate)) t.urls.push_back("https://news.example/" + id_prefix + std::to_string(e));
        if (rng.bernoulli(params.hashtag_rate)) t.hashtags.push_back(sub_keyword);

        if (rng.bernoulli(params.original_share)) {
            const std::size_t g = polarized ? pick_group(rng) : 0;
            const std::size_t i = pick_influencer[g](rng);
            t.author_id = influencer_id(g, i);
            latest_original[g][i] = t.id;
        } else {
            const std::size_t g = polarized ? pick_group(rng) : 0;
            t.author_id = retweeter_id(g, pick_retweeter[g](rng));
            std::size_t ig = g, i = 0;
            if (polarized) {
                ig = rng.bernoulli(params.in_group) ? g : 1 - g;
                i = pick_influencer[ig](rng);
            } else if (params.kind == StreamKind::Preferential) {
                i = WeightedPick(popularity)(rng);
                popularity[i] += 1.0;
            } else {
                i = pick_influencer[0](rng);
            }
            t.retweet_of_author = influencer_id(ig, i);
            const std::string& orig = latest_original[ig][i];
            t.retweet_of_tweet = orig.empty() ? id_prefix + "pre_" + std::to_string(ig) + "_" + std::to_string(i) : orig;
        }
        ds.tweets.push_back(std::move(t));
    }
    std::sort(ds.tweets.begin(), ds.tweets.end(), tweet_time_less);
    return ds;
}

const std::vector<std::pair<SeedSpec, std::vector<std::string>>>& builtin_topics() {
    static const std::vector<std::pair<SeedSpec, std::vector<std::string>>> topics = {
        {{"election", Genre::Politics, 0},
         {"ballot", "senate", "debate", "turnout", "campaign", "governor", "mayor", "caucus", "primary", "recount"}},
        {{"summit", Genre::International, 0},
         {"treaty", "embassy", "sanctions", "border", "refugees", "envoy", "ceasefire", "tariffs", "alliance", "delegates"}},
        {{"market", Genre::Business, 0},
         {"stocks", "earnings", "merger", "startup", "bonds", "layoffs", "inflation", "crypto", "dividend", "retail"}},
        {{"league", Genre::Sports, 0},
         {"striker", "transfer", "playoff", "referee", "goalkeeper", "derby", "stadium", "coach", "injury", "trophy"}},
        {{"typhoon", Genre::WeatherDisaster, 0},
         {"evacuation", "landfall", "flooding", "rainfall", "shelter", "blackout", "warning", "damage", "rescue", "forecast"}},
        {{"museum", Genre::ScienceCulture, 0},
         {"exhibit", "painting", "fossil", "telescope", "sculpture", "gallery", "curator", "dinosaur", "festival", "novel"}},
    };
    return topics;
}

Corpus generate_corpus(const CorpusOptions& options) {
    const auto& catalog = builtin_topics();
    if (options.seeds == 0 || options.seeds > catalog.size()) throw ArgumentError("generate_corpus: 1 to 6 seeds supported");
    if (options.subs_per_seed == 0 || options.subs_per_seed > 10) throw ArgumentError("generate_corpus: 1 to 10 subs per seed");
    if (options.min_tweets == 0 || options.min_tweets > options.max_tweets) throw ArgumentError("generate_corpus: bad tweet range");

    Corpus corpus;
    Rng rng(derive_seed(options.rng_seed, "synth.corpus"));
    std::size_t non_polarized = 0;
    for (std::size_t s = 0; s < options.seeds; ++s) {
        SeedSpec spec = catalog[s].first;
        spec.window_start = options.base_time + static_cast<EpochMs>(s) * 24 * kHourMs;
        corpus.seeds.push_back(spec);

        std::vector<std::size_t> order(options.subs_per_seed);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        const std::size_t n_pol = std::min(s < options.polarized_per_seed.size() ? options.polarized_per_seed[s] : 0,
                                           options.subs_per_seed);
        std::vector<bool> planted(options.subs_per_seed, false);
        for (std::size_t i = 0; i < n_pol; ++i) planted[order[i]] = true;

        for (std::size_t j = 0; j < options.subs_per_seed; ++j) {
            const std::string& sub = catalog[s].second[j];
            StreamParams p;
            if (planted[j]) {
                p.kind = StreamKind::Polarized;
                p.in_group = rng.uniform(0.87, 0.95);
                p.community_share = rng.uniform(0.5, 0.62);
                p.url_rate = rng.uniform(0.45, 0.75);
                p.hashtag_rate = rng.uniform(0.3, 0.5);
                p.activity_skew = rng.uniform(0.4, 0.6);
                p.mean_retweets_per_user = rng.uniform(3.5, 6.0);
            } else {
                p.kind = (non_polarized++ % 2 == 0) ? StreamKind::Preferential : StreamKind::Star;
                p.url_rate = rng.uniform(0.1, 0.4);
                p.hashtag_rate = rng.uniform(0.05, 0.3);
                p.activity_skew = rng.uniform(0.4, 0.8);
                p.mean_retweets_per_user = p.kind == StreamKind::Star ? rng.uniform(1.5, 3.0) : rng.uniform(3.0, 6.0);
            }
            p.decay_hours = rng.uniform(2.0, 8.0);
            const double lo = std::log(static_cast<double>(options.min_tweets));
            const double hi = std::log(static_cast<double>(options.max_tweets));
            p.tweets = static_cast<std::size_t>(std::exp(rng.uniform(lo, hi)));

            const std::string tag = std::to_string(s) + "_" + std::to_string(j);
            TopicDataset ds = generate_stream(p, spec.keyword, sub, spec.genre, spec.window_start, "t" + tag + "_",
                                              "u" + tag + "_", derive_seed(options.rng_seed, "synth.stream", s * 100 + j));

            const auto strays = static_cast<std::size_t>(static_cast<double>(p.tweets) * options.out_of_window_share);
            for (std::size_t k = 0; k < strays; ++k) {
                Tweet t;
                t.id = "t" + tag + "_x" + std::to_string(k);
                t.author_id = "u" + tag + "_x" + std::to_string(k);
                const EpochMs offset = 1 + static_cast<EpochMs>(rng.index(6 * kHourMs));
                t.created_at = k % 2 == 0 ? ds.window_start - offset : ds.window_end + offset;
                t.text = tweet_text(rng, spec.keyword, sub);
                corpus.tweets.push_back(std::move(t));
            }

            PlantedTopic pt;
            pt.seed_keyword = spec.keyword;
            pt.sub_keyword = sub;
            pt.genre = spec.genre;
            pt.window_start = ds.window_start;
            pt.window_end = ds.window_end;
            pt.kind = p.kind;
            pt.polarized = planted[j];
            pt.tweets = ds.tweets.size();
            corpus.topics.push_back(pt);
            for (Tweet& t : ds.tweets) corpus.tweets.push_back(std::move(t));
        }
    }
    std::sort(corpus.tweets.begin(), corpus.tweets.end(), tweet_time_less);
    return corpus;
}

RetweetNetwork erdos_renyi(std::size_t n, std::size_t edges, std::uint64_t rng_seed) {
    if (n < 2 || edges > n * (n - 1)) throw ArgumentError("erdos_renyi: impossible edge count");
    Rng rng(rng_seed);
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    pairs.reserve(edges);
    while (pairs.size() < edges) {
        const auto s = static_cast<NodeIndex>(rng.index(n));
        const auto t = static_cast<NodeIndex>(rng.index(n));
        if (s == t || !seen.insert(RetweetNetwork::pair_key(s, t)).second) continue;
        pairs.emplace_back(s, t);
    }
    return RetweetNetwork::from_pairs(n, pairs, "erdos_renyi");
}

RetweetNetwork star(std::size_t leaves) {
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t i = 1; i <= leaves; ++i) pairs.emplace_back(0, static_cast<NodeIndex>(i));
    return RetweetNetwork::from_pairs(leaves + 1, pairs, "star");
}

RetweetNetwork planted_pair(std::size_t group, double p_in, std::size_t bridges, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t g = 0; g < 2; ++g) {
        const std::size_t base = g * group;
        for (std::size_t i = 0; i < group; ++i) {
            for (std::size_t j = 0; j < group; ++j) {
                if (i != j && rng.bernoulli(p_in)) {
                    pairs.emplace_back(static_cast<NodeIndex>(base + i), static_cast<NodeIndex>(base + j));
                }
            }
        }
    }
    std::unordered_set<std::uint64_t> seen;
    while (seen.size() < std::min(bridges, 2 * group * group)) {
        auto a = static_cast<NodeIndex>(rng.index(group));
        auto b = static_cast<NodeIndex>(group + rng.index(group));
        if (rng.bernoulli(0.5)) std::swap(a, b);
        if (seen.insert(RetweetNetwork::pair_key(a, b)).second) pairs.emplace_back(a, b);
    }
    return RetweetNetwork::from_pairs(2 * group, pairs, "planted_pair");
}

RetweetNetwork random_directed(std::size_t n, double p, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) pairs.emplace_back(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
        }
    }
    return RetweetNetwork::from_pairs(n, pairs, "random");
}

} // namespace rtpol::synth
