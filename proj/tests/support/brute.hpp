#pragma once

// Slow reference implementations for the test suite. Everything here works by
// literal enumeration: all simple paths for separation, all subsets for
// separability, a per-node forward walk for ancestry. Nothing is shared with
// the library beyond the graph containers, so agreement between the two is
// evidence, not the same code run twice.

#include <functional>
#include <vector>

#include "loci/core.hpp"
#include "loci/graph.hpp"

namespace brute {

using loci::CausalDag;
using loci::Mark;
using loci::MixedGraph;
using loci::NodeId;
using loci::NodeSet;

// Nodes with a directed path into `targets`, targets included. Walks child
// edges forward from every node rather than parent edges backward.
inline NodeSet dag_ancestors_of(const CausalDag& g, NodeSet targets) {
    NodeSet anc;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeSet seen = NodeSet::single(v);
        std::vector<NodeId> stack{v};
        bool hit = targets.contains(v);
        while (!stack.empty() && !hit) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId c : g.children(u)) {
                if (targets.contains(c)) hit = true;
                if (!seen.contains(c)) {
                    seen.insert(c);
                    stack.push_back(c);
                }
            }
        }
        if (hit) anc.insert(v);
    }
    return anc;
}

inline NodeSet mag_ancestors_of(const MixedGraph& g, NodeSet targets) {
    auto children = [&g](NodeId u) {
        NodeSet out;
        for (NodeId c : g.neighbors(u))
            if (g.mark_at(u, c) == Mark::Tail && g.mark_at(c, u) == Mark::Arrow) out.insert(c);
        return out;
    };
    NodeSet anc;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        NodeSet seen = NodeSet::single(v);
        std::vector<NodeId> stack{v};
        bool hit = targets.contains(v);
        while (!stack.empty() && !hit) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId c : children(u)) {
                if (targets.contains(c)) hit = true;
                if (!seen.contains(c)) {
                    seen.insert(c);
                    stack.push_back(c);
                }
            }
        }
        if (hit) anc.insert(v);
    }
    return anc;
}

struct PathView {
    std::function<NodeSet(NodeId)> neighbors;
    // Arrowhead at `at` on its edge toward `from`.
    std::function<bool(NodeId at, NodeId from)> arrow_at;
};

// Enumerates every simple path from x to y and tests each against the
// separation criterion directly: noncolliders must avoid z, colliders must
// have a descendant in z.
inline bool connecting_path_exists(const PathView& view, NodeId x, NodeId y, NodeSet z, NodeSet collider_enablers) {
    std::vector<NodeId> path{x};
    NodeSet visited = NodeSet::single(x);
    bool found = false;
    std::function<void(NodeId)> dfs = [&](NodeId cur) {
        if (found) return;
        if (cur == y) {
            for (size_t i = 1; i + 1 < path.size(); ++i) {
                NodeId m = path[i];
                bool collider = view.arrow_at(m, path[i - 1]) && view.arrow_at(m, path[i + 1]);
                if (collider ? !collider_enablers.contains(m) : z.contains(m)) return;
            }
            found = true;
            return;
        }
        for (NodeId n : view.neighbors(cur)) {
            if (visited.contains(n)) continue;
            visited.insert(n);
            path.push_back(n);
            dfs(n);
            path.pop_back();
            visited.erase(n);
        }
    };
    dfs(x);
    return found;
}

inline bool d_separated(const CausalDag& g, NodeId x, NodeId y, NodeSet z) {
    PathView view{
        [&g](NodeId n) { return g.parents(n).unite(g.children(n)); },
        [&g](NodeId at, NodeId from) { return g.has_edge(from, at); },
    };
    return !connecting_path_exists(view, x, y, z, dag_ancestors_of(g, z));
}

inline bool m_separated(const MixedGraph& g, NodeId x, NodeId y, NodeSet z) {
    PathView view{
        [&g](NodeId n) { return g.neighbors(n); },
        [&g](NodeId at, NodeId from) { return g.mark_at(at, from) == Mark::Arrow; },
    };
    return !connecting_path_exists(view, x, y, z, mag_ancestors_of(g, z));
}

// Every subset of the remaining nodes, via the (sub - 1) & mask walk.
inline bool any_subset(NodeSet pool, const std::function<bool(NodeSet)>& pred) {
    const std::uint64_t mask = pool.bits();
    std::uint64_t sub = mask;
    while (true) {
        if (pred(NodeSet(sub))) return true;
        if (sub == 0) return false;
        sub = (sub - 1) & mask;
    }
}

inline bool separable(const MixedGraph& g, NodeId x, NodeId y) {
    NodeSet pool = NodeSet::full(g.node_count()).without(x).without(y);
    return any_subset(pool, [&](NodeSet z) { return brute::m_separated(g, x, y, z); });
}

inline bool separable(const CausalDag& g, NodeId x, NodeId y, NodeSet pool) {
    return any_subset(pool, [&](NodeSet z) { return brute::d_separated(g, x, y, z); });
}

inline bool is_ancestral(const MixedGraph& g) {
    for (auto [a, b] : g.edges()) {
        for (NodeId v : {a, b}) {
            NodeId o = v == a ? b : a;
            if (g.mark_at(v, o) != Mark::Arrow) continue;
            // arrowhead into v: v must not be an ancestor of the other end,
            // and must not also carry an undirected edge
            if (mag_ancestors_of(g, NodeSet::single(o)).contains(v)) return false;
            for (NodeId w : g.neighbors(v))
                if (g.mark_at(v, w) == Mark::Tail && g.mark_at(w, v) == Mark::Tail) return false;
        }
    }
    return true;
}

inline bool is_maximal(const MixedGraph& g) {
    for (NodeId x = 0; x < g.node_count(); ++x)
        for (NodeId y = x + 1; y < g.node_count(); ++y)
            if (!g.adjacent(x, y) && !brute::separable(g, x, y)) return false;
    return true;
}

// Flat record of the full separation relation over all pairs and all
// conditioning subsets; equal signatures mean Markov equivalent.
inline std::vector<bool> separation_signature(const MixedGraph& g) {
    const int n = g.node_count();
    std::vector<bool> sig;
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y) {
            NodeSet pool = NodeSet::full(n).without(x).without(y);
            const std::uint64_t mask = pool.bits();
            std::uint64_t sub = mask;
            while (true) {
                sig.push_back(brute::m_separated(g, x, y, NodeSet(sub)));
                if (sub == 0) break;
                sub = (sub - 1) & mask;
            }
        }
    return sig;
}

// Directed-path ancestry on the data-generating side, for checking derived
// causal statements against ground truth.
inline bool causes(const CausalDag& g, NodeId a, NodeId b) {
    return a != b && dag_ancestors_of(g, NodeSet::single(b)).contains(a);
}

inline bool causes_selection(const CausalDag& g, NodeId a) {
    return !g.selection().contains(a) && dag_ancestors_of(g, g.selection()).contains(a);
}

}  // namespace brute
