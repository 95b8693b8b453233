#pragma once

#include <cstddef>
#include <vector>

#include "rtpol/features.hpp"
#include "rtpol/forest.hpp"
#include "rtpol/sampler.hpp"

namespace rtpol {

struct MlEstimatorOptions {
    ForestConfig forest;
    FeatureSchema schema;
    std::size_t folds = 10;
    ViabilityThresholds viability;   ///< used only for the optional naive feature
    PolarizationConfig polarization; ///< idem
    unsigned jobs = 1;
};

/// Features of a sampled subset, network included (prediction mode).
TopicFeatures subset_features(const TopicDataset& subset, const FeatureSchema& schema, std::uint64_t seed,
                              const MlEstimatorOptions& options);

/// Random-forest estimator. For each k the draws of every trial are pooled;
/// subset features are regressed on the full-data phi_hat of their topic with
/// folds grouped by topic, and each draw gets its out-of-fold prediction. Empty
/// subsets are not estimable and get 0.
BatchEstimator ml_estimator(std::vector<double> truth_phi_hat, MlEstimatorOptions options);

} // namespace rtpol
