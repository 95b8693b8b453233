#include "rtpol/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "rtpol/error.hpp"
#include "rtpol/random.hpp"

namespace rtpol {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Undirected weighted graph in CSR form with vertex weights.
struct WGraph {
    std::vector<std::uint32_t> xadj{0};
    std::vector<std::uint32_t> adj;
    std::vector<std::int64_t> ew;
    std::vector<std::int64_t> vw;
    std::int64_t total_vw = 0;

    std::size_t size() const { return vw.size(); }
};

WGraph build_csr(std::size_t n, std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>>& undirected,
                 std::vector<std::int64_t> vw) {
    std::sort(undirected.begin(), undirected.end());
    // merge duplicates
    std::size_t out = 0;
    for (std::size_t i = 0; i < undirected.size(); ++i) {
        if (out > 0 && std::get<0>(undirected[out - 1]) == std::get<0>(undirected[i]) &&
            std::get<1>(undirected[out - 1]) == std::get<1>(undirected[i])) {
            std::get<2>(undirected[out - 1]) += std::get<2>(undirected[i]);
        } else {
            undirected[out++] = undirected[i];
        }
    }
    undirected.resize(out);

    WGraph g;
    g.vw = std::move(vw);
    g.total_vw = std::accumulate(g.vw.begin(), g.vw.end(), std::int64_t{0});
    std::vector<std::uint32_t> degree(n, 0);
    for (const auto& [u, v, w] : undirected) {
        ++degree[u];
        ++degree[v];
    }
    g.xadj.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.xadj[i + 1] = g.xadj[i] + degree[i];
    g.adj.resize(g.xadj[n]);
    g.ew.resize(g.xadj[n]);
    std::vector<std::uint32_t> fill(g.xadj.begin(), g.xadj.end() - 1);
    for (const auto& [u, v, w] : undirected) {
        g.adj[fill[u]] = v;
        g.ew[fill[u]++] = w;
        g.adj[fill[v]] = u;
        g.ew[fill[v]++] = w;
    }
    return g;
}

WGraph symmetrize(const RetweetNetwork& net) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> und;
    und.reserve(net.edge_count());
    for (const Edge& e : net.edges()) {
        und.emplace_back(std::min(e.source, e.target), std::max(e.source, e.target), e.multiplicity);
    }
    return build_csr(net.node_count(), und, std::vector<std::int64_t>(net.node_count(), 1));
}

WGraph induce(const WGraph& g, const std::vector<std::uint32_t>& nodes) {
    std::vector<std::uint32_t> local(g.size(), kNone);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> und;
    std::vector<std::int64_t> vw(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::uint32_t u = nodes[i];
        vw[i] = g.vw[u];
        for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
            const std::uint32_t v = g.adj[e];
            if (local[v] != kNone && u < v) und.emplace_back(local[u], local[v], g.ew[e]);
        }
    }
    return build_csr(nodes.size(), und, std::move(vw));
}

std::vector<std::vector<std::uint32_t>> components(const WGraph& g) {
    std::vector<std::vector<std::uint32_t>> comps;
    std::vector<bool> seen(g.size(), false);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < g.size(); ++s) {
        if (seen[s]) continue;
        comps.emplace_back();
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::uint32_t u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
                const std::uint32_t v = g.adj[e];
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
}

std::int64_t cut_of(const WGraph& g, const std::vector<std::uint8_t>& part) {
    std::int64_t cut = 0;
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
            if (part[u] != part[g.adj[e]]) cut += g.ew[e];
        }
    }
    return cut / 2;
}

std::int64_t weight_a(const WGraph& g, const std::vector<std::uint8_t>& part) {
    std::int64_t w = 0;
    for (std::size_t u = 0; u < g.size(); ++u) {
        if (part[u] == 0) w += g.vw[u];
    }
    return w;
}

// ---------------------------------------------------------------------------
// coarsening by heavy-edge matching

struct CoarseLevel {
    WGraph graph;
    std::vector<std::uint32_t> map; // fine node -> coarse node
};

CoarseLevel coarsen(const WGraph& g, Rng& rng, std::int64_t max_vertex_weight) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);

    std::vector<std::uint32_t> match(n, kNone);
    for (std::uint32_t u : order) {
        if (match[u] != kNone) continue;
        std::uint32_t best = kNone;
        std::int64_t best_w = -1;
        for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
            const std::uint32_t v = g.adj[e];
            if (match[v] != kNone || g.vw[u] + g.vw[v] > max_vertex_weight) continue;
            if (g.ew[e] > best_w) {
                best_w = g.ew[e];
                best = v;
            }
        }
        if (best == kNone) {
            match[u] = u;
        } else {
            match[u] = best;
            match[best] = u;
        }
    }

    CoarseLevel level;
    level.map.assign(n, kNone);
    std::vector<std::uint32_t> first, second;
    for (std::uint32_t u = 0; u < n; ++u) {
        if (level.map[u] != kNone) continue;
        const auto c = static_cast<std::uint32_t>(first.size());
        level.map[u] = c;
        level.map[match[u]] = c;
        first.push_back(u);
        second.push_back(match[u]);
    }
    const std::size_t cn = first.size();

    // aggregate edges with a dense marker
    WGraph& cg = level.graph;
    cg.vw.resize(cn);
    cg.xadj.assign(1, 0);
    std::vector<std::uint32_t> slot(cn, kNone);
    for (std::uint32_t c = 0; c < cn; ++c) {
        const std::uint32_t members[2] = {first[c], second[c]};
        cg.vw[c] = g.vw[members[0]] + (members[1] != members[0] ? g.vw[members[1]] : 0);
        const std::size_t begin = cg.adj.size();
        for (int m = 0; m < (members[1] != members[0] ? 2 : 1); ++m) {
            const std::uint32_t u = members[m];
            for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
                const std::uint32_t cv = level.map[g.adj[e]];
                if (cv == c) continue;
                if (slot[cv] == kNone) {
                    slot[cv] = static_cast<std::uint32_t>(cg.adj.size());
                    cg.adj.push_back(cv);
                    cg.ew.push_back(g.ew[e]);
                } else {
                    cg.ew[slot[cv]] += g.ew[e];
                }
            }
        }
        for (std::size_t i = begin; i < cg.adj.size(); ++i) slot[cg.adj[i]] = kNone;
        cg.xadj.push_back(static_cast<std::uint32_t>(cg.adj.size()));
    }
    cg.total_vw = g.total_vw;
    return level;
}

// ---------------------------------------------------------------------------
// initial partition: greedy region growing into block A (label 0)

std::vector<std::uint8_t> grow_region(const WGraph& g, Rng& rng, std::int64_t lo, std::int64_t hi) {
    const std::size_t n = g.size();
    std::vector<std::uint8_t> part(n, 1);
    std::vector<std::int64_t> wdeg(n, 0), conn(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) wdeg[u] += g.ew[e];
    }
    const std::int64_t target = std::clamp(g.total_vw / 2, lo, hi);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);
    std::size_t next_seed = 0;

    // max-heap on (gain of moving into A, lower index first)
    using Entry = std::pair<std::int64_t, std::uint32_t>;
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> frontier(cmp);
    auto score = [&](std::uint32_t u) { return 2 * conn[u] - wdeg[u]; };

    std::int64_t w0 = 0;
    while (w0 < target) {
        std::uint32_t pick = kNone;
        while (!frontier.empty()) {
            const auto [s, u] = frontier.top();
            frontier.pop();
            if (part[u] == 0 || s != score(u) || w0 + g.vw[u] > hi) continue;
            pick = u;
            break;
        }
        while (pick == kNone && next_seed < n) {
            const std::uint32_t u = order[next_seed++];
            if (part[u] == 1 && w0 + g.vw[u] <= hi) pick = u;
        }
        if (pick == kNone) break;
        part[pick] = 0;
        w0 += g.vw[pick];
        for (std::uint32_t e = g.xadj[pick]; e < g.xadj[pick + 1]; ++e) {
            const std::uint32_t v = g.adj[e];
            if (part[v] == 0) continue;
            conn[v] += g.ew[e];
            frontier.emplace(score(v), v);
        }
    }
    return part;
}

// ---------------------------------------------------------------------------
// Fiduccia-Mattheyses refinement with gain buckets

class GainBuckets {
public:
    GainBuckets(std::size_t n, std::int64_t max_gain)
        : offset_(max_gain), head_(static_cast<std::size_t>(2 * max_gain + 1), kNone), next_(n, kNone),
          prev_(n, kNone), gain_(n, 0), present_(n, false) {}

    bool empty() const { return count_ == 0; }
    bool contains(std::uint32_t v) const { return present_[v]; }
    std::int64_t gain(std::uint32_t v) const { return gain_[v]; }

    void insert(std::uint32_t v, std::int64_t gain) {
        const auto b = bucket(gain);
        gain_[v] = gain;
        present_[v] = true;
        prev_[v] = kNone;
        next_[v] = head_[b];
        if (head_[b] != kNone) prev_[head_[b]] = v;
        head_[b] = v;
        top_ = std::max(top_, static_cast<std::int64_t>(b));
        ++count_;
    }

    void remove(std::uint32_t v) {
        const auto b = bucket(gain_[v]);
        if (prev_[v] != kNone) {
            next_[prev_[v]] = next_[v];
        } else {
            head_[b] = next_[v];
        }
        if (next_[v] != kNone) prev_[next_[v]] = prev_[v];
        present_[v] = false;
        --count_;
    }

    void update(std::uint32_t v, std::int64_t gain) {
        if (gain_[v] == gain) return;
        remove(v);
        insert(v, gain);
    }

    /// Highest-gain node; bucket must be non-empty.
    std::uint32_t top() {
        while (head_[static_cast<std::size_t>(top_)] == kNone) --top_;
        return head_[static_cast<std::size_t>(top_)];
    }

private:
    std::size_t bucket(std::int64_t gain) const { return static_cast<std::size_t>(gain + offset_); }

    std::int64_t offset_;
    std::vector<std::uint32_t> head_, next_, prev_;
    std::vector<std::int64_t> gain_;
    std::vector<bool> present_;
    std::int64_t top_ = 0;
    std::size_t count_ = 0;
};

void fm_refine(const WGraph& g, std::vector<std::uint8_t>& part, std::int64_t lo, std::int64_t hi, unsigned max_passes,
               std::size_t level, PartitionTrace* trace) {
    const std::size_t n = g.size();
    if (n < 2) return;
    std::vector<std::int64_t> id(n), ed(n);
    std::int64_t max_gain = 0;
    auto recompute = [&] {
        std::int64_t cut = 0;
        for (std::uint32_t u = 0; u < n; ++u) {
            id[u] = ed[u] = 0;
            for (std::uint32_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
                (part[u] == part[g.adj[e]] ? id[u] : ed[u]) += g.ew[e];
            }
            cut += ed[u];
            max_gain = std::max(max_gain, id[u] + ed[u]);
        }
        return cut / 2;
    };
    std::int64_t cut = recompute();
    std::int64_t w0 = weight_a(g, part);
    RTPOL_CHECK(w0 >= lo && w0 <= hi, "refinement starts from a balanced partition");
    const std::size_t stall_limit = std::clamp<std::size_t>(n / 20, 50, 400);

    for (unsigned pass = 0; pass < max_passes; ++pass) {
        const std::int64_t cut_before = cut;
        RefinementPass record;
        record.level = level;
        record.graph_nodes = n;
        record.cut_before = cut_before;
        record.min_weight_a = record.max_weight_a = w0;
        record.lower_bound_a = lo;
        record.upper_bound_a = hi;

        GainBuckets buckets[2] = {GainBuckets(n, max_gain), GainBuckets(n, max_gain)};
        std::vector<bool> locked(n, false);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (ed[v] > 0) buckets[part[v]].insert(v, ed[v] - id[v]);
        }

        std::vector<std::uint32_t> moves;
        std::int64_t best_cut = cut;
        std::size_t best_len = 0;
        std::size_t since_best = 0;
        for (;;) {
            std::uint32_t cand[2] = {kNone, kNone};
            if (!buckets[0].empty()) {
                const std::uint32_t v = buckets[0].top();
                if (w0 - g.vw[v] >= lo) cand[0] = v;
            }
            if (!buckets[1].empty()) {
                const std::uint32_t v = buckets[1].top();
                if (w0 + g.vw[v] <= hi) cand[1] = v;
            }
            int from;
            if (cand[0] == kNone && cand[1] == kNone) break;
            if (cand[0] == kNone) {
                from = 1;
            } else if (cand[1] == kNone) {
                from = 0;
            } else {
                const std::int64_t g0 = buckets[0].gain(cand[0]);
                const std::int64_t g1 = buckets[1].gain(cand[1]);
                if (g0 != g1) {
                    from = g0 > g1 ? 0 : 1;
                } else {
                    from = 2 * w0 >= g.total_vw ? 0 : 1; // move out of the heavier block
                }
            }
            const std::uint32_t v = cand[from];
            const std::int64_t gain = ed[v] - id[v];
            buckets[from].remove(v);
            locked[v] = true;
            cut -= gain;
            part[v] = static_cast<std::uint8_t>(1 - from);
            w0 += from == 0 ? -g.vw[v] : g.vw[v];
            RTPOL_CHECK(w0 >= lo && w0 <= hi, "every accepted move keeps the balance constraint");
            record.min_weight_a = std::min(record.min_weight_a, w0);
            record.max_weight_a = std::max(record.max_weight_a, w0);
            std::swap(id[v], ed[v]);
            for (std::uint32_t e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
                const std::uint32_t u = g.adj[e];
                if (part[u] == part[v]) {
                    id[u] += g.ew[e];
                    ed[u] -= g.ew[e];
                } else {
                    id[u] -= g.ew[e];
                    ed[u] += g.ew[e];
                }
                if (locked[u]) continue;
                GainBuckets& b = buckets[part[u]];
                if (b.contains(u)) {
                    b.update(u, ed[u] - id[u]);
                } else if (ed[u] > 0) {
                    b.insert(u, ed[u] - id[u]);
                }
            }
            moves.push_back(v);
            if (cut < best_cut) {
                best_cut = cut;
                best_len = moves.size();
                since_best = 0;
            } else if (++since_best > stall_limit) {
                break;
            }
        }
        for (std::size_t i = moves.size(); i > best_len; --i) {
            const std::uint32_t v = moves[i - 1];
            w0 += part[v] == 0 ? -g.vw[v] : g.vw[v];
            part[v] ^= 1;
        }
        cut = recompute();
        RTPOL_CHECK(cut == best_cut, "rollback restores the best prefix");
        RTPOL_CHECK(cut <= cut_before, "a refinement pass never increases the cut");
        RTPOL_CHECK(w0 == weight_a(g, part), "block weight bookkeeping");
        record.cut_after = cut;
        if (trace != nullptr) trace->passes.push_back(record);
        if (cut == cut_before) break;
    }
}

// ---------------------------------------------------------------------------

struct Candidate {
    std::vector<std::uint8_t> part;
    std::int64_t cut = std::numeric_limits<std::int64_t>::max();
};

Candidate multilevel(const WGraph& g, std::int64_t lo, std::int64_t hi, std::uint64_t seed,
                     const PartitionOptions& options, PartitionTrace* trace) {
    Rng rng(seed);
    const double threshold = static_cast<double>(std::max<std::size_t>(options.coarsen_threshold, 2));
    const std::int64_t cap = std::max<std::int64_t>(
        1, std::min<std::int64_t>(static_cast<std::int64_t>(1.5 * static_cast<double>(g.total_vw) / threshold),
                                  (hi - lo) / 2));

    std::vector<CoarseLevel> levels;
    auto graph_at = [&](std::size_t l) -> const WGraph& { return l == 0 ? g : levels[l - 1].graph; };
    while (graph_at(levels.size()).size() > options.coarsen_threshold) {
        const WGraph& fine = graph_at(levels.size());
        CoarseLevel next = coarsen(fine, rng, cap);
        if (next.graph.size() * 20 > fine.size() * 19) break;
        levels.push_back(std::move(next));
    }
    if (trace != nullptr) {
        trace->level_sizes.clear();
        for (std::size_t l = 0; l <= levels.size(); ++l) trace->level_sizes.push_back(graph_at(l).size());
    }

    const std::size_t top = levels.size();
    const WGraph& coarsest = graph_at(top);
    Candidate best;
    for (unsigned t = 0; t < std::max(1u, options.initial_tries); ++t) {
        std::vector<std::uint8_t> part = grow_region(coarsest, rng, lo, hi);
        const std::int64_t w0 = weight_a(coarsest, part);
        if (w0 < lo || w0 > hi) continue;
        fm_refine(coarsest, part, lo, hi, options.fm_passes, top, trace);
        const std::int64_t cut = cut_of(coarsest, part);
        if (cut < best.cut) {
            best.cut = cut;
            best.part = std::move(part);
        }
    }
    if (best.part.empty()) throw PartitionError("bisect: no balanced initial partition exists for this graph");

    for (std::size_t l = top; l > 0; --l) {
        const CoarseLevel& coarse = levels[l - 1];
        const WGraph& fine = graph_at(l - 1);
        std::vector<std::uint8_t> projected(fine.size());
        for (std::size_t u = 0; u < fine.size(); ++u) projected[u] = best.part[coarse.map[u]];
        best.part = std::move(projected);
        fm_refine(fine, best.part, lo, hi, options.fm_passes, l - 1, trace);
    }
    best.cut = cut_of(g, best.part);
    return best;
}

Candidate best_of_restarts(const WGraph& g, std::int64_t lo, std::int64_t hi, std::uint64_t seed,
                           const PartitionOptions& options, PartitionTrace* trace) {
    Candidate best;
    for (unsigned r = 0; r < std::max(1u, options.restarts); ++r) {
        Candidate c = multilevel(g, lo, hi, derive_seed(seed, "bisect.restart", r), options, trace);
        if (c.cut < best.cut) best = std::move(c);
    }
    return best;
}

} // namespace

std::size_t max_block_size(std::size_t n, double max_imbalance) {
    if (n < 2) return n;
    const auto cap = static_cast<std::size_t>(std::ceil(max_imbalance * static_cast<double>(n) - 1e-9));
    return std::max((n + 1) / 2, std::min(cap, n - 1));
}

Bisection make_bisection(const RetweetNetwork& network, std::vector<Block> assignment) {
    if (assignment.size() != network.node_count()) {
        throw ArgumentError("bisection covers " + std::to_string(assignment.size()) + " nodes, network has " +
                            std::to_string(network.node_count()));
    }
    Bisection b;
    b.assignment = std::move(assignment);
    for (Block x : b.assignment) (x == Block::A ? b.size_a : b.size_b)++;
    for (const Edge& e : network.edges()) {
        if (b.assignment[e.source] != b.assignment[e.target]) b.cut_weight += e.multiplicity;
    }
    const std::size_t n = network.node_count();
    b.balance = n == 0 ? 0.0 : static_cast<double>(std::max(b.size_a, b.size_b)) / static_cast<double>(n);
    return b;
}

Bisection bisect(const RetweetNetwork& network, std::uint64_t seed, const PartitionOptions& options,
                 PartitionTrace* trace) {
    const std::size_t n = network.node_count();
    if (n < 2) throw PartitionError("bisect: network needs at least 2 nodes, has " + std::to_string(n));
    const std::size_t max_block = max_block_size(n, options.max_imbalance);
    const auto lo = static_cast<std::int64_t>(n - max_block);
    const auto hi = static_cast<std::int64_t>(max_block);

    const WGraph g = symmetrize(network);
    auto comps = components(g);
    std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    if (trace != nullptr) trace->components = comps.size();

    std::vector<std::uint8_t> part;
    std::int64_t expected_cut = -1;
    if (comps.size() == 1) {
        Candidate c = best_of_restarts(g, lo, hi, seed, options, trace);
        part = std::move(c.part);
        expected_cut = c.cut;
    } else {
        if (comps.front().size() <= max_block) {
            // whole components, largest first, each into the lighter block
            std::vector<std::uint8_t> packed(n, 0);
            std::int64_t w[2] = {0, 0};
            for (const auto& comp : comps) {
                const int to = w[0] <= w[1] ? 0 : 1;
                for (std::uint32_t u : comp) packed[u] = static_cast<std::uint8_t>(to);
                w[to] += static_cast<std::int64_t>(comp.size());
            }
            if (w[0] >= lo && w[0] <= hi) {
                part = std::move(packed);
                expected_cut = 0;
                if (trace != nullptr) trace->packed_components = true;
            }
        }
        if (part.empty()) {
            // The largest component must be split; the rest stay whole in block B.
            const auto& giant = comps.front();
            const auto s = static_cast<std::int64_t>(giant.size());
            const std::int64_t sub_hi = std::min(hi, s - 1);
            if (lo > sub_hi) throw PartitionError("bisect: balance constraint cannot be met");
            const WGraph sub = induce(g, giant);
            Candidate c = best_of_restarts(sub, lo, sub_hi, seed, options, trace);
            part.assign(n, 1);
            for (std::size_t i = 0; i < giant.size(); ++i) part[giant[i]] = c.part[i];
            expected_cut = c.cut;
        }
    }

    std::vector<Block> assignment(n);
    for (std::size_t u = 0; u < n; ++u) assignment[u] = part[u] == 0 ? Block::A : Block::B;
    Bisection b = make_bisection(network, std::move(assignment));
    RTPOL_CHECK(b.size_a > 0 && b.size_b > 0, "both blocks non-empty");
    RTPOL_CHECK(std::max(b.size_a, b.size_b) <= max_block, "balance within the imbalance bound");
    RTPOL_CHECK(static_cast<std::int64_t>(b.cut_weight) == expected_cut, "cut weight self-consistency");
    return b;
}

CutQuality cut_quality(const RetweetNetwork& network, const Bisection& bisection) {
    if (bisection.assignment.size() != network.node_count()) {
        throw ArgumentError("cut_quality: assignment has " + std::to_string(bisection.assignment.size()) +
                            " labels for " + std::to_string(network.node_count()) + " nodes");
    }
    CutQuality q;
    std::uint64_t total = 0;
    for (const Edge& e : network.edges()) {
        const Block s = bisection.assignment[e.source];
        const Block t = bisection.assignment[e.target];
        if ((s != Block::A && s != Block::B) || (t != Block::A && t != Block::B)) {
            throw ArgumentError("cut_quality: node carries an invalid block label");
        }
        total += e.multiplicity;
        if (s != t) q.cut_weight += e.multiplicity;
    }
    q.normalized_cut = total == 0 ? 0.0 : static_cast<double>(q.cut_weight) / static_cast<double>(total);
    return q;
}

void write_partition(const RetweetNetwork& network, const Bisection& bisection, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write partition: " + path);
    for (std::size_t i = 0; i < network.node_count(); ++i) {
        out << network.node_id(static_cast<NodeIndex>(i)) << '\t' << (bisection.assignment[i] == Block::A ? 'A' : 'B')
            << '\n';
    }
}

} // namespace rtpol
