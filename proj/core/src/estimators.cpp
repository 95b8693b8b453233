#include "rtpol/estimators.hpp"

#include "rtpol/parallel.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

TopicFeatures subset_features(const TopicDataset& subset, const FeatureSchema& schema, std::uint64_t seed,
                              const MlEstimatorOptions& options) {
    const RetweetNetwork net = build_network(subset);
    std::optional<PolarizationResult> naive;
    if (schema.naive_phi_hat) {
        naive = naive_estimate(subset, seed, options.viability, options.polarization, 1).result;
        if (!naive) {
            naive.emplace();
            naive->phi_hat = 0.0;
        }
    }
    return assemble_features(subset, net, naive);
}

BatchEstimator ml_estimator(std::vector<double> truth_phi_hat, MlEstimatorOptions options) {
    return [truth = std::move(truth_phi_hat), options](std::size_t k, const std::vector<TopicDataset>& topics,
                                                       const std::vector<Draw>& draws) {
        std::vector<std::optional<std::vector<double>>> encoded(draws.size());
        parallel_for(draws.size(), options.jobs, [&](std::size_t i) {
            const Draw& d = draws[i];
            if (d.tweets.empty()) return;
            const TopicDataset subset = subset_of(topics[d.topic], d.tweets);
            encoded[i] = options.schema.encode(subset_features(subset, options.schema, d.seed, options));
        });
        Matrix x;
        std::vector<double> y;
        std::vector<std::size_t> groups, row_of;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            if (!encoded[i]) continue;
            x.push_back(*encoded[i]);
            y.push_back(truth.at(draws[i].topic));
            groups.push_back(draws[i].topic);
            row_of.push_back(i);
        }
        ForestConfig forest = options.forest;
        forest.rng_seed = derive_seed(options.forest.rng_seed, "ml.k", k);
        const CrossValidation cv = cross_validate(x, y, options.folds, forest, 0.04, &groups, options.jobs);
        std::vector<double> out(draws.size(), 0.0);
        for (std::size_t r = 0; r < row_of.size(); ++r) out[row_of[r]] = cv.predictions[r];
        return out;
    };
}

} // namespace rtpol
