#pragma once

// Separation predicates. d_separated works on DAGs, m_separated on ancestral
// mixed graphs; both run the same reachability: a walk state is (node,
// incoming mark at that node), and a node may be crossed either as a
// noncollider outside the conditioning set or as a collider with a descendant
// in it. Walk reachability and path connectivity coincide for these criteria,
// which the test suite cross-checks against literal path enumeration.

#include <vector>

#include "loci/graph.hpp"

namespace loci {

// Nodes with a directed path to x, including x itself.
inline NodeSet ancestors(const CausalDag& g, NodeId x) {
    g.check_node(x);
    NodeSet seen = NodeSet::single(x);
    std::vector<NodeId> stack{x};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v))
            if (!seen.contains(p)) {
                seen.insert(p);
                stack.push_back(p);
            }
    }
    return seen;
}

// Same, following only fully directed edges (tail at parent, arrow at child).
inline NodeSet ancestors(const MixedGraph& g, NodeId x) {
    g.check_node(x);
    NodeSet seen = NodeSet::single(x);
    std::vector<NodeId> stack{x};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.neighbors(v))
            if (!seen.contains(p) && g.directed_edge(p, v)) {
                seen.insert(p);
                stack.push_back(p);
            }
    }
    return seen;
}

inline NodeSet ancestors_of_set(const CausalDag& g, NodeSet xs) {
    NodeSet all;
    for (NodeId x : xs) all = all.unite(ancestors(g, x));
    return all;
}

inline NodeSet ancestors_of_set(const MixedGraph& g, NodeSet xs) {
    NodeSet all;
    for (NodeId x : xs) all = all.unite(ancestors(g, x));
    return all;
}

namespace detail {

// Shared connection search. EdgeView must provide node_count(),
// neighbors(v) -> NodeSet, and marks(a, b) -> (mark at a, mark at b).
template <typename EdgeView>
bool connected_given(const EdgeView& g, NodeId x, NodeId y, NodeSet z, NodeSet collider_enablers) {
    const int n = g.node_count();
    // visited[v] has bit 0 for "reached with arrow into v", bit 1 for tail/other.
    std::vector<unsigned> visited(static_cast<size_t>(n), 0);
    struct State { NodeId node; bool arrow_in; };
    std::vector<State> stack;
    for (NodeId v : g.neighbors(x)) {
        bool arrow_in = g.marks(x, v).second == Mark::Arrow;
        if (v == y) return true;
        unsigned bit = arrow_in ? 1u : 2u;
        if (!(visited[static_cast<size_t>(v)] & bit)) {
            visited[static_cast<size_t>(v)] |= bit;
            stack.push_back({v, arrow_in});
        }
    }
    while (!stack.empty()) {
        auto [u, arrow_in] = stack.back();
        stack.pop_back();
        for (NodeId w : g.neighbors(u)) {
            auto [at_u, at_w] = g.marks(u, w);
            bool collider = arrow_in && at_u == Mark::Arrow;
            bool passable = collider ? collider_enablers.contains(u) : !z.contains(u);
            if (!passable) continue;
            if (w == y) return true;
            bool next_arrow = at_w == Mark::Arrow;
            unsigned bit = next_arrow ? 1u : 2u;
            if (!(visited[static_cast<size_t>(w)] & bit)) {
                visited[static_cast<size_t>(w)] |= bit;
                stack.push_back({w, next_arrow});
            }
        }
    }
    return false;
}

struct DagView {
    const CausalDag& g;
    int node_count() const { return g.node_count(); }
    NodeSet neighbors(NodeId v) const { return g.parents(v).unite(g.children(v)); }
    std::pair<Mark, Mark> marks(NodeId a, NodeId b) const {
        return g.has_edge(a, b) ? std::pair{Mark::Tail, Mark::Arrow} : std::pair{Mark::Arrow, Mark::Tail};
    }
};

struct MixedView {
    const MixedGraph& g;
    int node_count() const { return g.node_count(); }
    NodeSet neighbors(NodeId v) const { return g.neighbors(v); }
    std::pair<Mark, Mark> marks(NodeId a, NodeId b) const { return {g.mark_at(a, b), g.mark_at(b, a)}; }
};

inline void check_separation_args(int n, NodeId x, NodeId y, NodeSet z) {
    if (x < 0 || x >= n || y < 0 || y >= n) throw std::invalid_argument("node index out of range");
    if (!z.minus(NodeSet::full(n)).empty()) throw std::invalid_argument("conditioning set node out of range");
    if (x == y || z.contains(x) || z.contains(y)) throw std::invalid_argument("separation arguments overlap");
}

// m-separation without the ancestrality precondition check; callers that
// enumerate candidate graphs verify ancestrality once, not per query.
inline bool m_separated_unchecked(const MixedGraph& g, NodeId x, NodeId y, NodeSet z) {
    check_separation_args(g.node_count(), x, y, z);
    return !connected_given(MixedView{g}, x, y, z, ancestors_of_set(g, z));
}

}  // namespace detail

inline bool d_separated(const CausalDag& g, NodeId x, NodeId y, NodeSet z) {
    detail::check_separation_args(g.node_count(), x, y, z);
    return !detail::connected_given(detail::DagView{g}, x, y, z, ancestors_of_set(g, z));
}

// No directed cycle through an arrowhead, and no arrowhead at a node
// carrying an undirected edge.
inline bool is_ancestral(const MixedGraph& g) {
    const int n = g.node_count();
    std::vector<NodeSet> anc(static_cast<size_t>(n));
    for (NodeId v = 0; v < n; ++v) anc[static_cast<size_t>(v)] = ancestors(g, v);
    NodeSet undirected_touch;
    for (auto [a, b] : g.edges()) {
        if (g.mark_at(a, b) == Mark::Tail && g.mark_at(b, a) == Mark::Tail) {
            undirected_touch.insert(a);
            undirected_touch.insert(b);
        }
    }
    for (auto [a, b] : g.edges()) {
        if (g.mark_at(a, b) == Mark::Arrow) {
            if (anc[static_cast<size_t>(b)].contains(a)) return false;  // a is an ancestor of b
            if (undirected_touch.contains(a)) return false;
        }
        if (g.mark_at(b, a) == Mark::Arrow) {
            if (anc[static_cast<size_t>(a)].contains(b)) return false;
            if (undirected_touch.contains(b)) return false;
        }
    }
    return true;
}

inline bool m_separated(const MixedGraph& g, NodeId x, NodeId y, NodeSet z) {
    if (!is_ancestral(g)) throw std::invalid_argument("m_separated requires an ancestral graph");
    return detail::m_separated_unchecked(g, x, y, z);
}

// Every nonadjacent pair has some m-separating subset (exhaustive search).
inline bool is_maximal(const MixedGraph& g) {
    const int n = g.node_count();
    NodeSet all = NodeSet::full(n);
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y) {
            if (g.adjacent(x, y)) continue;
            bool separable = for_each_subset_by_size(
                all.without(x).without(y), n - 2,
                [&](NodeSet z) { return detail::m_separated_unchecked(g, x, y, z); });
            if (!separable) return false;
        }
    return true;
}

}  // namespace loci
