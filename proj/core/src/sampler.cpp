#include "rtpol/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rtpol/error.hpp"
#include "rtpol/parallel.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

std::vector<std::uint32_t> collect_at_points(const TopicDataset& dataset, const std::vector<double>& points,
                                             std::size_t m) {
    const auto& tweets = dataset.tweets;
    std::vector<bool> taken(tweets.size(), false);
    for (double p : points) {
        // first tweet strictly after the point
        auto it = std::upper_bound(tweets.begin(), tweets.end(), p,
                                   [](double point, const Tweet& t) { return point < static_cast<double>(t.created_at); });
        const auto end = static_cast<std::size_t>(it - tweets.begin());
        const std::size_t begin = end > m ? end - m : 0;
        for (std::size_t i = begin; i < end; ++i) taken[i] = true;
    }
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        if (taken[i]) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::vector<std::uint32_t> sample_indices(const TopicDataset& dataset, const SampleSpec& spec) {
    if (spec.k == 0 || spec.m == 0) throw ArgumentError("sample: k and m must be at least 1");
    Rng rng(spec.rng_seed);
    std::vector<double> points(spec.k);
    for (double& p : points) {
        p = rng.uniform(static_cast<double>(dataset.window_start), static_cast<double>(dataset.window_end));
    }
    return collect_at_points(dataset, points, spec.m);
}

TopicDataset subset_of(const TopicDataset& dataset, const std::vector<std::uint32_t>& indices) {
    TopicDataset out;
    out.seed_keyword = dataset.seed_keyword;
    out.sub_keyword = dataset.sub_keyword;
    out.window_start = dataset.window_start;
    out.window_end = dataset.window_end;
    out.genre = dataset.genre;
    out.tweets.reserve(indices.size());
    for (std::uint32_t i : indices) out.tweets.push_back(dataset.tweets.at(i));
    return out;
}

TopicDataset draw_sample(const TopicDataset& dataset, const SampleSpec& spec) {
    return subset_of(dataset, sample_indices(dataset, spec));
}

namespace {

int bucket_of(EpochMs t, EpochMs start, EpochMs end, int buckets) {
    const double span = static_cast<double>(end - start);
    const auto b = static_cast<int>(std::floor(static_cast<double>(t - start) * buckets / span));
    return std::clamp(b, 0, buckets - 1);
}

int hour_level_of(const std::vector<Tweet>& tweets, const std::vector<std::uint32_t>* indices, EpochMs start,
                  EpochMs end, int buckets) {
    std::vector<bool> hit(static_cast<std::size_t>(buckets), false);
    auto mark = [&](const Tweet& t) { hit[static_cast<std::size_t>(bucket_of(t.created_at, start, end, buckets))] = true; };
    if (indices != nullptr) {
        for (std::uint32_t i : *indices) mark(tweets[i]);
    } else {
        for (const Tweet& t : tweets) mark(t);
    }
    return static_cast<int>(std::count(hit.begin(), hit.end(), true)) - 1;
}

} // namespace

int hour_level(const TopicDataset& subset, EpochMs window_start, EpochMs window_end, int buckets) {
    if (subset.tweets.empty()) throw ArgumentError("hour_level: subset is empty");
    if (!(window_start < window_end) || buckets < 1) throw ArgumentError("hour_level: bad window");
    return hour_level_of(subset.tweets, nullptr, window_start, window_end, buckets);
}

NaiveEstimate naive_estimate(const TopicDataset& subset, std::uint64_t seed, const ViabilityThresholds& viability,
                             const PolarizationConfig& config, unsigned jobs) {
    const RetweetNetwork net = build_network(subset);
    NaiveEstimate est;
    if (viable(net, viability) && net.node_count() >= 2 && net.edge_count() >= 1) {
        est.result = normalized_score(net, seed, config, jobs);
    }
    return est;
}

const EvalCell& Evaluation::cell(std::size_t k, int level) const {
    for (const EvalCell& c : cells) {
        if (c.k == k && c.hour_level == level) return c;
    }
    throw ArgumentError("evaluation has no cell for k=" + std::to_string(k) + ", level=" + std::to_string(level));
}

const KSummary& Evaluation::summary(std::size_t k) const {
    for (const KSummary& s : per_k) {
        if (s.k == k) return s;
    }
    throw ArgumentError("evaluation has no summary for k=" + std::to_string(k));
}

std::vector<Draw> draw_grid(const std::vector<TopicDataset>& topics, std::size_t k, const EvalOptions& options) {
    std::vector<Draw> draws;
    draws.reserve(options.trials * topics.size());
    const std::uint64_t k_seed = derive_seed(options.seed, "evaluate.k", k);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(k_seed, "evaluate.trial", trial);
        for (std::size_t t = 0; t < topics.size(); ++t) {
            Draw d;
            d.topic = t;
            d.trial = trial;
            d.tweets = sample_indices(topics[t], {k, options.m, derive_seed(trial_seed, "evaluate.sample", t)});
            if (!d.tweets.empty()) {
                d.hour_level = hour_level_of(topics[t].tweets, &d.tweets, topics[t].window_start, topics[t].window_end,
                                             options.hour_buckets);
            }
            d.seed = derive_seed(trial_seed, "evaluate.estimate", t);
            draws.push_back(std::move(d));
        }
    }
    return draws;
}

namespace {

template <class T>
std::optional<double> mean_defined(const std::vector<EstimateScores>& scores, T member) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : scores) {
        if (s.*member) {
            sum += *(s.*member);
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

} // namespace

Evaluation evaluate(const std::vector<TopicDataset>& topics, const std::vector<double>& truth_phi_hat,
                    const BatchEstimator& estimator, const EvalOptions& options) {
    if (truth_phi_hat.size() != topics.size()) throw ArgumentError("evaluate: ground truth missing for some topics");
    if (options.trials == 0) throw ArgumentError("evaluate: trials must be at least 1");
    Evaluation ev;
    std::vector<double> all_truth, all_est;
    for (std::size_t k : options.k_values) {
        const std::vector<Draw> draws = draw_grid(topics, k, options);
        const std::vector<double> estimates = estimator(k, topics, draws);
        if (estimates.size() != draws.size()) throw ArgumentError("evaluate: estimator returned the wrong number of values");

        KSummary summary;
        summary.k = k;
        std::vector<std::vector<double>> cell_truth(static_cast<std::size_t>(options.hour_buckets));
        std::vector<std::vector<double>> cell_est(cell_truth.size());
        std::vector<std::vector<double>> trial_truth(options.trials), trial_est(options.trials);
        double size_sum = 0.0;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            const Draw& d = draws[i];
            const double truth = truth_phi_hat[d.topic];
            trial_truth[d.trial].push_back(truth);
            trial_est[d.trial].push_back(estimates[i]);
            all_truth.push_back(truth);
            all_est.push_back(estimates[i]);
            size_sum += static_cast<double>(d.tweets.size());
            if (d.hour_level) {
                cell_truth[static_cast<std::size_t>(*d.hour_level)].push_back(truth);
                cell_est[static_cast<std::size_t>(*d.hour_level)].push_back(estimates[i]);
            } else {
                ++summary.empty_subsets;
            }
            ev.points.push_back({k, d.topic, d.trial, d.hour_level, d.tweets.size(), truth, estimates[i]});
        }
        summary.mean_subset_size = draws.empty() ? 0.0 : size_sum / static_cast<double>(draws.size());
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
            summary.per_trial.push_back(score_estimates(trial_truth[trial], trial_est[trial], options.threshold));
        }
        summary.precision = mean_defined(summary.per_trial, &EstimateScores::precision);
        summary.recall = mean_defined(summary.per_trial, &EstimateScores::recall);
        summary.f_score = mean_defined(summary.per_trial, &EstimateScores::f_score);
        summary.r2 = mean_defined(summary.per_trial, &EstimateScores::r2);
        ev.per_k.push_back(std::move(summary));

        for (int level = 0; level < options.hour_buckets; ++level) {
            EvalCell c;
            c.k = k;
            c.hour_level = level;
            const auto& ct = cell_truth[static_cast<std::size_t>(level)];
            c.n_samples = ct.size();
            c.n_topics = static_cast<double>(c.n_samples) / static_cast<double>(options.trials);
            if (c.n_samples > 0) {
                const EstimateScores s = score_estimates(ct, cell_est[static_cast<std::size_t>(level)], options.threshold);
                c.precision = s.precision;
                c.recall = s.recall;
                c.f_score = s.f_score;
                c.r2 = s.r2;
            }
            ev.cells.push_back(c);
        }
    }
    ev.overall = score_estimates(all_truth, all_est, options.threshold);
    return ev;
}

BatchEstimator oracle_estimator(std::vector<double> truth_phi_hat) {
    return [truth = std::move(truth_phi_hat)](std::size_t, const std::vector<TopicDataset>&, const std::vector<Draw>& draws) {
        std::vector<double> out;
        out.reserve(draws.size());
        for (const Draw& d : draws) out.push_back(truth.at(d.topic));
        return out;
    };
}

BatchEstimator constant_estimator(double value) {
    return [value](std::size_t, const std::vector<TopicDataset>&, const std::vector<Draw>& draws) {
        return std::vector<double>(draws.size(), value);
    };
}

BatchEstimator naive_estimator(ViabilityThresholds viability, PolarizationConfig config, unsigned jobs) {
    return [=](std::size_t, const std::vector<TopicDataset>& topics, const std::vector<Draw>& draws) {
        std::vector<double> out(draws.size(), 0.0);
        parallel_for(draws.size(), jobs, [&](std::size_t i) {
            const Draw& d = draws[i];
            const TopicDataset subset = subset_of(topics[d.topic], d.tweets);
            out[i] = naive_estimate(subset, d.seed, viability, config, 1).phi_hat();
        });
        return out;
    };
}

} // namespace rtpol
