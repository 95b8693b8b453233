#include "rtpol/metrics.hpp"

#include "rtpol/error.hpp"

namespace rtpol {

std::optional<double> r2_score(std::span<const double> truth, std::span<const double> estimate) {
    if (truth.size() != estimate.size()) throw ArgumentError("r2_score: length mismatch");
    if (truth.empty()) return std::nullopt;
    double mean = 0.0;
    for (double y : truth) mean += y;
    mean /= static_cast<double>(truth.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_res += (truth[i] - estimate[i]) * (truth[i] - estimate[i]);
        ss_tot += (truth[i] - mean) * (truth[i] - mean);
    }
    if (ss_res == 0.0) return 1.0;
    if (ss_tot == 0.0) return std::nullopt;
    return 1.0 - ss_res / ss_tot;
}

EstimateScores score_estimates(std::span<const double> truth, std::span<const double> estimate, double threshold) {
    if (truth.size() != estimate.size()) throw ArgumentError("score_estimates: length mismatch");
    EstimateScores s;
    s.count = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] > threshold;
        const bool predicted = estimate[i] > threshold;
        if (actual && predicted) {
            ++s.true_positive;
        } else if (predicted) {
            ++s.false_positive;
        } else if (actual) {
            ++s.false_negative;
        } else {
            ++s.true_negative;
        }
    }
    const auto tp = static_cast<double>(s.true_positive);
    if (s.true_positive + s.false_positive > 0) s.precision = tp / static_cast<double>(s.true_positive + s.false_positive);
    if (s.true_positive + s.false_negative > 0) s.recall = tp / static_cast<double>(s.true_positive + s.false_negative);
    if (s.precision && s.recall) {
        const double sum = *s.precision + *s.recall;
        s.f_score = sum == 0.0 ? 0.0 : 2.0 * *s.precision * *s.recall / sum;
    }
    s.r2 = r2_score(truth, estimate);
    return s;
}

} // namespace rtpol
