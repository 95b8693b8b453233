#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rtpol/graph.hpp"
#include "rtpol/ingest.hpp"
#include "rtpol/metrics.hpp"
#include "rtpol/polarization.hpp"

namespace rtpol {

struct SampleSpec {
    std::size_t k = 10;   ///< random collection points
    std::size_t m = 100;  ///< tweets collected back from each point
    std::uint64_t rng_seed = 0;
};

/// Indices (ascending, deduplicated) of the tweets collected from explicit
/// time points: for each point, the m latest tweets with created_at <= point.
std::vector<std::uint32_t> collect_at_points(const TopicDataset& dataset, const std::vector<double>& points,
                                             std::size_t m);

/// Indices for k points drawn uniformly over the dataset window.
std::vector<std::uint32_t> sample_indices(const TopicDataset& dataset, const SampleSpec& spec);

/// Copy of the dataset restricted to the given tweet indices.
TopicDataset subset_of(const TopicDataset& dataset, const std::vector<std::uint32_t>& indices);

TopicDataset draw_sample(const TopicDataset& dataset, const SampleSpec& spec);

/// Distinct equal-width window buckets touched by the subset, minus one.
/// Throws ArgumentError on an empty subset.
int hour_level(const TopicDataset& subset, EpochMs window_start, EpochMs window_end, int buckets = 12);

struct NaiveEstimate {
    std::optional<PolarizationResult> result; ///< empty when the subset network is not viable
    bool estimable() const { return result.has_value(); }
    /// Not-estimable subsets score 0 (not polarized).
    double phi_hat() const { return result ? result->phi_hat : 0.0; }
};

NaiveEstimate naive_estimate(const TopicDataset& subset, std::uint64_t seed, const ViabilityThresholds& viability = {},
                             const PolarizationConfig& config = {}, unsigned jobs = 1);

/// One sampled subset inside an evaluation grid.
struct Draw {
    std::size_t topic = 0;
    std::size_t trial = 0;
    std::vector<std::uint32_t> tweets; ///< indices into the topic's tweets
    std::optional<int> hour_level;     ///< empty for an empty subset
    std::uint64_t seed = 0;            ///< positional seed for estimators
};

/// Estimates phi_hat for every draw of one k. Returns one value per draw.
using BatchEstimator =
    std::function<std::vector<double>(std::size_t k, const std::vector<TopicDataset>& topics, const std::vector<Draw>& draws)>;

struct EvalOptions {
    std::vector<std::size_t> k_values = {10, 20, 40, 80, 160, 320};
    std::size_t trials = 10;
    std::size_t m = 100;
    double threshold = 0.04;
    int hour_buckets = 12;
    std::uint64_t seed = 0;
};

struct EvalCell {
    std::size_t k = 0;
    int hour_level = 0;
    std::size_t n_samples = 0; ///< topic-trials in the cell, pooled over trials
    double n_topics = 0.0;     ///< n_samples / trials
    std::optional<double> precision, recall, f_score, r2;
};

struct KSummary {
    std::size_t k = 0;
    /// Means over trials of the per-trial scores (trials where a score is undefined are skipped).
    std::optional<double> precision, recall, f_score, r2;
    std::vector<EstimateScores> per_trial;
    std::size_t empty_subsets = 0;
    double mean_subset_size = 0.0;
};

struct EstimatePoint {
    std::size_t k = 0, topic = 0, trial = 0;
    std::optional<int> hour_level;
    std::size_t subset_size = 0;
    double truth = 0.0, estimate = 0.0;
};

struct Evaluation {
    std::vector<EvalCell> cells; ///< k-major, one per (k, hour_level) for every level in [0, buckets)
    std::vector<KSummary> per_k;
    EstimateScores overall;      ///< pooled over every k and trial
    std::vector<EstimatePoint> points;

    const EvalCell& cell(std::size_t k, int level) const;
    const KSummary& summary(std::size_t k) const;
};

/// Draw grid for one k: trials x topics, in trial-major order.
std::vector<Draw> draw_grid(const std::vector<TopicDataset>& topics, std::size_t k, const EvalOptions& options);

Evaluation evaluate(const std::vector<TopicDataset>& topics, const std::vector<double>& truth_phi_hat,
                    const BatchEstimator& estimator, const EvalOptions& options = {});

/// Returns the ground-truth score of each draw's topic.
BatchEstimator oracle_estimator(std::vector<double> truth_phi_hat);

/// Returns the same value for every draw.
BatchEstimator constant_estimator(double value);

/// Scores each draw with naive_estimate on up to `jobs` threads.
BatchEstimator naive_estimator(ViabilityThresholds viability, PolarizationConfig config, unsigned jobs = 1);

} // namespace rtpol
