#pragma once

// Markov equivalence over MAGs by definition: two graphs are equivalent when
// they agree on every m-separation query. enumerate_equivalent_mags walks the
// whole class by brute force and invariant_marks folds the class into a PAG;
// these serve as the ground-truth oracle the discovery algorithms are
// validated against, so they deliberately stay close to the definitions.

#include <vector>

#include "loci/separation.hpp"

namespace loci {

namespace detail {

// Answers to every (x, y, z) m-separation query, in a fixed order.
inline std::vector<bool> separation_signature(const MixedGraph& g) {
    const int n = g.node_count();
    NodeSet all = NodeSet::full(n);
    std::vector<bool> sig;
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y)
            for_each_subset_by_size(all.without(x).without(y), n - 2, [&](NodeSet z) {
                sig.push_back(m_separated_unchecked(g, x, y, z));
                return false;
            });
    return sig;
}

// Early-exit comparison against a precomputed signature.
inline bool matches_signature(const MixedGraph& g, const std::vector<bool>& sig) {
    const int n = g.node_count();
    NodeSet all = NodeSet::full(n);
    size_t i = 0;
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y) {
            bool mismatch = for_each_subset_by_size(all.without(x).without(y), n - 2, [&](NodeSet z) {
                return m_separated_unchecked(g, x, y, z) != sig[i++];
            });
            if (mismatch) return false;
        }
    return true;
}

}  // namespace detail

inline bool markov_equivalent(const MixedGraph& g1, const MixedGraph& g2) {
    if (g1.labels() != g2.labels()) throw std::invalid_argument("markov_equivalent: node sets differ");
    if (!is_ancestral(g1) || !is_ancestral(g2)) throw std::invalid_argument("markov_equivalent requires ancestral graphs");
    return detail::matches_signature(g2, detail::separation_signature(g1));
}

// Every MAG Markov-equivalent to g, including g itself, in a deterministic
// order. Only graphs sharing g's skeleton can be equivalent (an adjacency
// difference always shows up as a separability difference between maximal
// graphs), so the search varies the four mark assignments per edge.
inline std::vector<MixedGraph> enumerate_equivalent_mags(const MixedGraph& g, int max_nodes = 5) {
    if (g.node_count() > max_nodes)
        throw ResourceLimitError("equivalence-class enumeration limited to " + std::to_string(max_nodes) + " nodes");
    if (!is_ancestral(g) || !is_maximal(g)) throw std::invalid_argument("enumerate_equivalent_mags requires a MAG");

    const std::vector<bool> sig = detail::separation_signature(g);
    const auto edges = g.edges();
    const int e = static_cast<int>(edges.size());
    // Mark pairs per edge, odometer order: ->, <-, <->, --
    static constexpr std::pair<Mark, Mark> kEdgeKinds[4] = {
        {Mark::Tail, Mark::Arrow}, {Mark::Arrow, Mark::Tail}, {Mark::Arrow, Mark::Arrow}, {Mark::Tail, Mark::Tail}};

    std::vector<MixedGraph> result;
    MixedGraph candidate(g.labels());
    for (auto [a, b] : edges) candidate.add_edge(a, b, Mark::Circle, Mark::Circle);

    std::vector<int> odo(static_cast<size_t>(e), 0);
    while (true) {
        for (int i = 0; i < e; ++i) {
            auto [a, b] = edges[static_cast<size_t>(i)];
            auto [at_a, at_b] = kEdgeKinds[odo[static_cast<size_t>(i)]];
            candidate.set_mark(a, b, at_a);
            candidate.set_mark(b, a, at_b);
        }
        // Ancestral + same independence model + same skeleton as a MAG
        // implies maximal, so no separate maximality filter is needed.
        if (is_ancestral(candidate) && detail::matches_signature(candidate, sig)) result.push_back(candidate);
        int i = e - 1;
        while (i >= 0 && odo[static_cast<size_t>(i)] == 3) odo[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
        ++odo[static_cast<size_t>(i)];
    }
    return result;
}

// PAG of g's equivalence class: marks shared by every class member survive,
// the rest become circles.
inline MixedGraph invariant_marks(const MixedGraph& g, int max_nodes = 5) {
    std::vector<MixedGraph> cls = enumerate_equivalent_mags(g, max_nodes);
    MixedGraph pag(g.labels());
    for (auto [a, b] : g.edges()) {
        Mark at_a = cls.front().mark_at(a, b);
        Mark at_b = cls.front().mark_at(b, a);
        for (const auto& member : cls) {
            if (member.mark_at(a, b) != at_a) at_a = Mark::Circle;
            if (member.mark_at(b, a) != at_b) at_b = Mark::Circle;
        }
        pag.add_edge(a, b, at_a, at_b);
    }
    return pag;
}

}  // namespace loci
