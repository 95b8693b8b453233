#include "rtpol/graph.hpp"

#include <fstream>
#include <sstream>

#include "rtpol/error.hpp"

namespace rtpol {

RetweetNetwork RetweetNetwork::from_pairs(std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs,
                                          std::string topic_ref) {
    RetweetNetwork net(std::move(topic_ref));
    for (std::size_t i = 0; i < n; ++i) net.add_node(std::to_string(i));
    for (const auto& [s, t] : pairs) {
        if (s >= n || t >= n) throw ArgumentError("from_pairs: endpoint out of range");
        net.add_edge(s, t);
    }
    return net;
}

NodeIndex RetweetNetwork::add_node(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it != index_.end()) return it->second;
    const auto idx = static_cast<NodeIndex>(ids_.size());
    ids_.emplace_back(id);
    index_.emplace(ids_.back(), idx);
    return idx;
}

bool RetweetNetwork::add_edge(NodeIndex source, NodeIndex target, std::uint32_t multiplicity) {
    RTPOL_CHECK(source < ids_.size() && target < ids_.size(), "edge endpoints exist");
    if (source == target || multiplicity == 0) return false;
    auto [it, inserted] = edge_slot_.emplace(pair_key(source, target), edges_.size());
    if (inserted) {
        edges_.push_back({source, target, multiplicity});
    } else {
        edges_[it->second].multiplicity += multiplicity;
    }
    return true;
}

std::optional<NodeIndex> RetweetNetwork::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool RetweetNetwork::has_edge(NodeIndex source, NodeIndex target) const {
    return edge_slot_.count(pair_key(source, target)) != 0;
}

std::uint64_t RetweetNetwork::total_multiplicity() const {
    std::uint64_t total = 0;
    for (const Edge& e : edges_) total += e.multiplicity;
    return total;
}

void RetweetNetwork::replace_edges(std::vector<Edge> edges) {
    edges_.clear();
    edge_slot_.clear();
    for (const Edge& e : edges) add_edge(e.source, e.target, e.multiplicity);
}

RetweetNetwork build_network(const TopicDataset& dataset, std::string topic_ref) {
    RetweetNetwork net(std::move(topic_ref));
    for (const Tweet& t : dataset.tweets) {
        if (!t.is_retweet() || *t.retweet_of_author == t.author_id) continue;
        const NodeIndex author = net.add_node(*t.retweet_of_author);
        const NodeIndex retweeter = net.add_node(t.author_id);
        net.add_edge(author, retweeter);
    }
    return net;
}

NetworkStats stats(const RetweetNetwork& network) {
    if (network.empty()) throw StatsError("stats: network has no nodes");
    NetworkStats s;
    s.node_count = network.node_count();
    s.edge_count = network.edge_count();
    s.average_degree = static_cast<double>(s.edge_count) / static_cast<double>(s.node_count);
    return s;
}

bool viable(const RetweetNetwork& network, const ViabilityThresholds& thresholds) {
    return network.node_count() >= thresholds.min_nodes && network.edge_count() >= thresholds.min_edges;
}

std::vector<std::uint32_t> out_degrees(const RetweetNetwork& network) {
    std::vector<std::uint32_t> deg(network.node_count(), 0);
    for (const Edge& e : network.edges()) ++deg[e.source];
    return deg;
}

std::vector<std::uint32_t> in_degrees(const RetweetNetwork& network) {
    std::vector<std::uint32_t> deg(network.node_count(), 0);
    for (const Edge& e : network.edges()) ++deg[e.target];
    return deg;
}

void write_edge_list(const RetweetNetwork& network, const std::string& edges_path, const std::string& nodes_path) {
    std::ofstream edges(edges_path, std::ios::binary);
    if (!edges) throw IoError("cannot write edge list: " + edges_path);
    for (const Edge& e : network.edges()) {
        edges << network.node_id(e.source) << '\t' << network.node_id(e.target) << '\t' << e.multiplicity << '\n';
    }
    std::ofstream nodes(nodes_path, std::ios::binary);
    if (!nodes) throw IoError("cannot write node map: " + nodes_path);
    for (std::size_t i = 0; i < network.node_count(); ++i) nodes << i << '\t' << network.node_ids()[i] << '\n';
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

} // namespace

RetweetNetwork read_edge_list(const std::string& edges_path, const std::string& nodes_path) {
    RetweetNetwork net;
    std::string line;
    if (!nodes_path.empty()) {
        std::ifstream nodes(nodes_path);
        if (!nodes) throw IoError("cannot read node map: " + nodes_path);
        std::size_t line_no = 0;
        while (std::getline(nodes, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto cols = split_tabs(line);
            if (cols.size() != 2 || cols[0] != std::to_string(net.node_count())) {
                throw SchemaError(nodes_path + ":" + std::to_string(line_no) + ": expected \"<dense index>\\t<node id>\"");
            }
            net.add_node(cols[1]);
        }
    }
    std::ifstream edges(edges_path);
    if (!edges) throw IoError("cannot read edge list: " + edges_path);
    std::size_t line_no = 0;
    while (std::getline(edges, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cols = split_tabs(line);
        unsigned long mult = 0;
        bool ok = cols.size() == 3;
        if (ok) {
            try {
                std::size_t used = 0;
                mult = std::stoul(cols[2], &used);
                ok = used == cols[2].size() && mult > 0;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) throw SchemaError(edges_path + ":" + std::to_string(line_no) + ": expected \"source\\ttarget\\tmultiplicity\"");
        auto s = net.find(cols[0]);
        auto t = net.find(cols[1]);
        if (!nodes_path.empty() && (!s || !t)) {
            throw SchemaError(edges_path + ":" + std::to_string(line_no) + ": endpoint missing from node map");
        }
        const NodeIndex si = s ? *s : net.add_node(cols[0]);
        const NodeIndex ti = t ? *t : net.add_node(cols[1]);
        net.add_edge(si, ti, static_cast<std::uint32_t>(mult));
    }
    return net;
}

} // namespace rtpol
