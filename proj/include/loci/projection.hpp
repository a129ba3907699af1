#pragma once

// Projection of a causal DAG onto its observed margin: the unique MAG over
// the observed nodes that preserves every conditional independence under
// latent marginalization and selection conditioning.

#include <vector>

#include "loci/separation.hpp"

namespace loci {

// Two observed nodes stay adjacent iff no observed conditioning set (always
// augmented with the selection nodes) d-separates them; an endpoint gets a
// Tail iff it is a DAG ancestor of the other endpoint or of selection.
inline MixedGraph project_to_mag(const CausalDag& dag) {
    NodeSet obs = dag.observed();
    NodeSet sel = dag.selection();
    std::vector<NodeId> dag_node = obs.to_vector();
    const int m = static_cast<int>(dag_node.size());

    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(m));
    for (NodeId v : dag_node) labels.push_back(dag.label(v));
    MixedGraph mag(std::move(labels));

    std::vector<NodeSet> anc(static_cast<size_t>(m));
    NodeSet sel_anc = ancestors_of_set(dag, sel);
    for (int i = 0; i < m; ++i) anc[static_cast<size_t>(i)] = ancestors(dag, dag_node[static_cast<size_t>(i)]);

    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            NodeId x = dag_node[static_cast<size_t>(i)];
            NodeId y = dag_node[static_cast<size_t>(j)];
            bool separable = for_each_subset_by_size(
                obs.without(x).without(y), m - 2,
                [&](NodeSet z) { return d_separated(dag, x, y, z.unite(sel)); });
            if (separable) continue;
            bool tail_i = anc[static_cast<size_t>(j)].contains(x) || sel_anc.contains(x);
            bool tail_j = anc[static_cast<size_t>(i)].contains(y) || sel_anc.contains(y);
            mag.add_edge(i, j, tail_i ? Mark::Tail : Mark::Arrow, tail_j ? Mark::Tail : Mark::Arrow);
        }
    return mag;
}

}  // namespace loci
