#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rtpol/graph.hpp"
#include "rtpol/partition.hpp"

namespace rtpol {

/// Directed link densities between and within the two blocks.
struct BlockDensities {
    std::size_t size_a = 0, size_b = 0;
    std::uint64_t links_aa = 0, links_bb = 0, links_ab = 0, links_ba = 0;
    double aa = 0.0, bb = 0.0, ab = 0.0, ba = 0.0;
};

BlockDensities block_densities(const RetweetNetwork& network, const Bisection& bisection);

/// Adaptive E-I Index in [-1, 1]: (aa + bb - ab - ba) / (aa + bb + ab + ba) over
/// directed densities; a singleton block has zero internal density. Throws
/// UndefinedScoreError when every density is zero.
double adaptive_ei(const RetweetNetwork& network, const Bisection& bisection);

enum class NullModel : std::uint8_t {
    DegreeSequence,     ///< in/out degree sequence preserved (1K)
    JointDegree,        ///< additionally keeps the joint-degree matrix (2K)
};

struct RewireOptions {
    double swap_factor = 10.0; ///< attempted swaps = swap_factor * |E|
    NullModel model = NullModel::DegreeSequence;
};

struct NullSample {
    RetweetNetwork network; ///< same nodes, rewired distinct edges, multiplicity 1
    std::size_t attempted = 0;
    std::size_t accepted = 0;
    bool unchanged = false; ///< no swap was ever valid; edge set equals the input's
};

/// Degree-preserving randomization by directed double-edge swaps
/// (a->b, c->d) => (a->d, c->b), rejecting self-loops and duplicate edges.
NullSample rewire_null(const RetweetNetwork& network, std::uint64_t seed, const RewireOptions& options = {});

struct PolarizationConfig {
    std::size_t samples = 50;
    double threshold = 0.04;
    RewireOptions rewire;
    PartitionOptions partition;
};

struct PolarizationResult {
    double phi = 0.0;
    std::vector<double> null_scores;
    double null_mean = 0.0;
    double null_std = 0.0; ///< sample standard deviation (0 for fewer than two samples)
    double phi_hat = 0.0;  ///< phi - null_mean
    bool is_polarized = false;
    std::size_t unchanged_null_samples = 0;
    Bisection bisection; ///< partition of the observed network
};

/// Bisects the network, scores it, then scores `samples` rewired copies, each
/// repartitioned with its own positional seed. Null samples run on up to `jobs`
/// threads; the result does not depend on `jobs`.
PolarizationResult normalized_score(const RetweetNetwork& network, std::uint64_t seed,
                                    const PolarizationConfig& config = {}, unsigned jobs = 1);

} // namespace rtpol
