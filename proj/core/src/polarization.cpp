#include "rtpol/polarization.hpp"

#include <cmath>
#include <unordered_set>

#include "rtpol/error.hpp"
#include "rtpol/parallel.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

BlockDensities block_densities(const RetweetNetwork& network, const Bisection& bisection) {
    if (bisection.assignment.size() != network.node_count()) {
        throw ArgumentError("adaptive_ei: bisection does not match the network");
    }
    BlockDensities d;
    for (Block b : bisection.assignment) (b == Block::A ? d.size_a : d.size_b)++;
    if (d.size_a == 0 || d.size_b == 0) throw ArgumentError("adaptive_ei: both blocks must be non-empty");
    for (const Edge& e : network.edges()) {
        const bool sa = bisection.assignment[e.source] == Block::A;
        const bool ta = bisection.assignment[e.target] == Block::A;
        const std::uint64_t w = density_link_weight(e);
        if (sa && ta) {
            d.links_aa += w;
        } else if (!sa && !ta) {
            d.links_bb += w;
        } else if (sa) {
            d.links_ab += w;
        } else {
            d.links_ba += w;
        }
    }
    const double a = static_cast<double>(d.size_a);
    const double b = static_cast<double>(d.size_b);
    d.aa = d.size_a > 1 ? static_cast<double>(d.links_aa) / (a * (a - 1.0)) : 0.0;
    d.bb = d.size_b > 1 ? static_cast<double>(d.links_bb) / (b * (b - 1.0)) : 0.0;
    d.ab = static_cast<double>(d.links_ab) / (a * b);
    d.ba = static_cast<double>(d.links_ba) / (a * b);
    return d;
}

double adaptive_ei(const RetweetNetwork& network, const Bisection& bisection) {
    const BlockDensities d = block_densities(network, bisection);
    const double within = d.aa + d.bb;
    const double between = d.ab + d.ba;
    if (within + between == 0.0) throw UndefinedScoreError("adaptive_ei: all block densities are zero");
    return (within - between) / (within + between);
}

NullSample rewire_null(const RetweetNetwork& network, std::uint64_t seed, const RewireOptions& options) {
    std::vector<Edge> edges = network.edges();
    for (Edge& e : edges) e.multiplicity = 1;
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const Edge& e : edges) present.insert(RetweetNetwork::pair_key(e.source, e.target));

    std::vector<std::uint32_t> out_deg, in_deg;
    if (options.model == NullModel::JointDegree) {
        out_deg = out_degrees(network);
        in_deg = in_degrees(network);
    }
    auto same_signature = [&](NodeIndex x, NodeIndex y) { return out_deg[x] == out_deg[y] && in_deg[x] == in_deg[y]; };

    NullSample sample;
    const std::size_t m = edges.size();
    if (m >= 2) {
        Rng rng(seed);
        sample.attempted = static_cast<std::size_t>(std::llround(options.swap_factor * static_cast<double>(m)));
        for (std::size_t it = 0; it < sample.attempted; ++it) {
            const std::size_t i = rng.index(m);
            std::size_t j = rng.index(m - 1);
            if (j >= i) ++j;
            const NodeIndex a = edges[i].source, b = edges[i].target;
            const NodeIndex c = edges[j].source, d = edges[j].target;
            if (a == d || c == b) continue;
            const std::uint64_t ad = RetweetNetwork::pair_key(a, d);
            const std::uint64_t cb = RetweetNetwork::pair_key(c, b);
            if (present.count(ad) != 0 || present.count(cb) != 0) continue;
            if (options.model == NullModel::JointDegree && !same_signature(b, d) && !same_signature(a, c)) continue;
            present.erase(RetweetNetwork::pair_key(a, b));
            present.erase(RetweetNetwork::pair_key(c, d));
            present.insert(ad);
            present.insert(cb);
            edges[i].target = d;
            edges[j].target = b;
            ++sample.accepted;
        }
    }
    sample.unchanged = sample.accepted == 0;
    sample.network = network;
    sample.network.replace_edges(std::move(edges));
    return sample;
}

PolarizationResult normalized_score(const RetweetNetwork& network, std::uint64_t seed,
                                    const PolarizationConfig& config, unsigned jobs) {
    PolarizationResult result;
    result.bisection = bisect(network, derive_seed(seed, "score.bisect"), config.partition);
    result.phi = adaptive_ei(network, result.bisection);

    result.null_scores.assign(config.samples, 0.0);
    std::vector<char> unchanged(config.samples, 0);
    parallel_for(config.samples, jobs, [&](std::size_t i) {
        NullSample null = rewire_null(network, derive_seed(seed, "score.rewire", i), config.rewire);
        const Bisection b = bisect(null.network, derive_seed(seed, "score.null_bisect", i), config.partition);
        result.null_scores[i] = adaptive_ei(null.network, b);
        unchanged[i] = null.unchanged ? 1 : 0;
    });

    double sum = 0.0;
    for (std::size_t i = 0; i < config.samples; ++i) {
        sum += result.null_scores[i];
        result.unchanged_null_samples += static_cast<std::size_t>(unchanged[i]);
    }
    const auto count = static_cast<double>(config.samples);
    result.null_mean = config.samples == 0 ? 0.0 : sum / count;
    if (config.samples >= 2) {
        double ss = 0.0;
        for (double x : result.null_scores) ss += (x - result.null_mean) * (x - result.null_mean);
        result.null_std = std::sqrt(ss / (count - 1.0));
    }
    result.phi_hat = result.phi - result.null_mean;
    result.is_polarized = result.phi_hat > config.threshold;
    return result;
}

} // namespace rtpol
