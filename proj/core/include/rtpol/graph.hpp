#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtpol/ingest.hpp"

namespace rtpol {

using NodeIndex = std::uint32_t;

struct Edge {
    NodeIndex source = 0;
    NodeIndex target = 0;
    std::uint32_t multiplicity = 1;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed retweet graph: original author -> retweeter. One record per ordered
/// pair, repeats raise the multiplicity, no self-loops. Node indices are dense
/// and follow first appearance.
class RetweetNetwork {
public:
    RetweetNetwork() = default;
    explicit RetweetNetwork(std::string topic_ref) : topic_ref_(std::move(topic_ref)) {}

    /// Builds a network over nodes "0".."n-1" from (source, target) pairs;
    /// repeated pairs accumulate, self-loops are dropped.
    static RetweetNetwork from_pairs(std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs,
                                     std::string topic_ref = {});

    NodeIndex add_node(std::string_view id);
    /// Returns false (and does nothing) for self-loops.
    bool add_edge(NodeIndex source, NodeIndex target, std::uint32_t multiplicity = 1);

    std::optional<NodeIndex> find(std::string_view id) const;
    bool has_edge(NodeIndex source, NodeIndex target) const;

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return ids_.empty(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::string& node_id(NodeIndex i) const { return ids_[i]; }
    const std::string& topic_ref() const { return topic_ref_; }
    void set_topic_ref(std::string ref) { topic_ref_ = std::move(ref); }

    /// Sum of multiplicities.
    std::uint64_t total_multiplicity() const;

    /// Replaces the edge set; nodes are kept. Used by the null model.
    void replace_edges(std::vector<Edge> edges);

    static std::uint64_t pair_key(NodeIndex s, NodeIndex t) {
        return (static_cast<std::uint64_t>(s) << 32) | t;
    }

private:
    std::string topic_ref_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> edge_slot_;
};

/// Weight an edge contributes to link counts in density computations. Repeat
/// retweets are one relationship.
inline std::uint64_t density_link_weight(const Edge&) { return 1; }

struct NetworkStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double average_degree = 0.0;
};

RetweetNetwork build_network(const TopicDataset& dataset, std::string topic_ref = {});

/// Throws StatsError on an empty network.
NetworkStats stats(const RetweetNetwork& network);

struct ViabilityThresholds {
    std::size_t min_nodes = 50;
    std::size_t min_edges = 50;
};

bool viable(const RetweetNetwork& network, const ViabilityThresholds& thresholds = {});

std::vector<std::uint32_t> out_degrees(const RetweetNetwork& network);
std::vector<std::uint32_t> in_degrees(const RetweetNetwork& network);

/// Writes "source_id\ttarget_id\tmultiplicity" lines and a "index\tnode_id" map.
void write_edge_list(const RetweetNetwork& network, const std::string& edges_path, const std::string& nodes_path);

/// Reads the format produced by write_edge_list. The node map fixes indexing;
/// an empty nodes_path assigns indices by first appearance in the edge list.
RetweetNetwork read_edge_list(const std::string& edges_path, const std::string& nodes_path = {});

} // namespace rtpol
