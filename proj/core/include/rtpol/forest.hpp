#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtpol/features.hpp"
#include "rtpol/metrics.hpp"

namespace rtpol {

struct ForestConfig {
    std::size_t trees = 200;
    std::size_t features_per_split = 0; ///< 0 means ceil(p / 3)
    std::size_t min_samples_leaf = 2;
    std::size_t max_depth = 0;          ///< 0 means unlimited
    bool bootstrap = true;
    std::uint64_t rng_seed = 0;
    std::size_t min_rows = 20;
};

/// CART regression tree stored as a flat node array; node 0 is the root.
struct RegressionTree {
    struct Node {
        int feature = -1; ///< -1 for a leaf
        double threshold = 0.0; ///< go left when x[feature] <= threshold
        std::int32_t left = -1, right = -1;
        double value = 0.0; ///< mean target of the node's samples
        std::size_t samples = 0;
    };
    std::vector<Node> nodes;

    double predict(const std::vector<double>& x) const;
    std::size_t depth() const;
    std::size_t leaf_count() const;
};

using Matrix = std::vector<std::vector<double>>;

/// Grows one tree on the rows listed in `sample` (duplicates allowed, as in a
/// bootstrap). Splits maximize the weighted variance reduction over a random
/// subset of features; a node becomes a leaf when no split strictly reduces it.
RegressionTree grow_tree(const Matrix& x, const std::vector<double>& y, const std::vector<std::size_t>& sample,
                         const ForestConfig& config, std::uint64_t seed);

struct ForestModel {
    std::vector<std::string> feature_names;
    ForestConfig config;
    std::vector<RegressionTree> trees;

    std::size_t width() const { return feature_names.size(); }
    /// Mean of the tree predictions. Throws PredictionError on a width mismatch.
    double predict(const std::vector<double>& x) const;
    /// Encodes the features with the model's own schema first.
    double predict(const TopicFeatures& features) const;
    FeatureSchema schema() const;
};

/// Throws TrainingError for fewer than config.min_rows rows, ragged rows, or
/// non-finite values.
ForestModel fit_forest(const Matrix& x, const std::vector<double>& y, std::vector<std::string> feature_names,
                       const ForestConfig& config = {}, unsigned jobs = 1);

/// Fits on feature rows; every row needs a phi_hat target.
ForestModel fit_forest(const std::vector<FeatureRow>& rows, const FeatureSchema& schema, const ForestConfig& config = {},
                       unsigned jobs = 1);

void save_forest(std::ostream& out, const ForestModel& model);
void save_forest(const std::string& path, const ForestModel& model);
ForestModel load_forest(std::istream& in);
ForestModel load_forest(const std::string& path);

struct CrossValidation {
    std::vector<double> predictions; ///< out-of-fold prediction per row
    std::vector<std::size_t> fold_of;
    std::vector<EstimateScores> per_fold;
    EstimateScores pooled;
};

/// k-fold cross-validation. With `groups`, all rows sharing a group land in the
/// same fold. Folds are assigned by a seeded shuffle of rows (or groups) dealt
/// round-robin. Throws ArgumentError when folds exceed the rows (or groups).
CrossValidation cross_validate(const Matrix& x, const std::vector<double>& y, std::size_t folds,
                               const ForestConfig& config, double threshold = 0.04,
                               const std::vector<std::size_t>* groups = nullptr, unsigned jobs = 1);

} // namespace rtpol
