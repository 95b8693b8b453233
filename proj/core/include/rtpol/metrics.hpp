#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace rtpol {

/// Binarized agreement between estimated and true scores plus R^2. Undefined
/// values (no positive predictions, no positive truths, constant truth with
/// residual error) are nullopt, never 0.
struct EstimateScores {
    std::size_t count = 0;
    std::size_t true_positive = 0, false_positive = 0, false_negative = 0, true_negative = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_score;
    std::optional<double> r2;
};

/// A score counts as polarized when it is strictly greater than threshold.
EstimateScores score_estimates(std::span<const double> truth, std::span<const double> estimate, double threshold);

/// Coefficient of determination of estimate against truth. Returns 1 for an
/// exact fit and nullopt when truth is constant but the fit is not exact.
std::optional<double> r2_score(std::span<const double> truth, std::span<const double> estimate);

} // namespace rtpol
