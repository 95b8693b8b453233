#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rtpol/graph.hpp"

namespace rtpol {

enum class Block : std::uint8_t { A = 0, B = 1 };

struct Bisection {
    std::vector<Block> assignment; ///< per node
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::uint64_t cut_weight = 0; ///< symmetrized multiplicity weight across blocks
    double balance = 0.0;         ///< max(|A|, |B|) / |V|
};

struct PartitionOptions {
    double max_imbalance = 0.7;         ///< larger block holds at most this share (3:7)
    std::size_t coarsen_threshold = 200;
    unsigned restarts = 4;
    unsigned fm_passes = 10;            ///< per level
    unsigned initial_tries = 4;         ///< region-growing attempts on the coarsest graph
};

/// One Fiduccia-Mattheyses pass, recorded for diagnostics and tests.
struct RefinementPass {
    std::size_t level = 0;          ///< 0 = finest
    std::size_t graph_nodes = 0;
    std::int64_t cut_before = 0;
    std::int64_t cut_after = 0;
    std::int64_t min_weight_a = 0;  ///< extremes of block A weight over every accepted move
    std::int64_t max_weight_a = 0;
    std::int64_t lower_bound_a = 0; ///< allowed range for block A weight
    std::int64_t upper_bound_a = 0;
};

struct PartitionTrace {
    std::vector<RefinementPass> passes;
    std::size_t components = 0;
    bool packed_components = false; ///< solved by component bin packing
    std::vector<std::size_t> level_sizes; ///< node counts of the last restart's hierarchy
};

/// Largest admissible block for an n-node graph: ceil(max_imbalance * n), kept
/// within [ceil(n/2), n-1] so tiny graphs remain splittable.
std::size_t max_block_size(std::size_t n, double max_imbalance = 0.7);

/// Multilevel balanced bisection of the symmetrized network. Deterministic in
/// seed. Throws PartitionError when the network has fewer than two nodes.
Bisection bisect(const RetweetNetwork& network, std::uint64_t seed, const PartitionOptions& options = {},
                 PartitionTrace* trace = nullptr);

struct CutQuality {
    std::uint64_t cut_weight = 0;
    double normalized_cut = 0.0; ///< cut_weight / total multiplicity
};

/// Recounts the cut from scratch. Throws ArgumentError if the assignment does not
/// cover the network.
CutQuality cut_quality(const RetweetNetwork& network, const Bisection& bisection);

/// Rebuilds sizes, cut and balance for an explicit assignment.
Bisection make_bisection(const RetweetNetwork& network, std::vector<Block> assignment);

/// "node_id\tA|B" per node, in index order.
void write_partition(const RetweetNetwork& network, const Bisection& bisection, const std::string& path);

} // namespace rtpol
