#pragma once

// Graph types for causal discovery.
//
// CausalDag is the ground-truth model: a DAG whose nodes are observed,
// latent (never measured) or selection (implicitly conditioned on).
// MixedGraph covers everything with per-endpoint marks: ancestral graphs,
// MAGs, and the PAGs produced by discovery, where a Circle mark stands for
// "not determined". A directed DAG edge a->b is the mark pair (Tail, Arrow).

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "loci/core.hpp"

namespace loci {

enum class Role { Observed, Latent, Selection };

enum class Mark { Tail, Arrow, Circle };

inline char mark_char(Mark m) {
    switch (m) {
        case Mark::Tail: return '-';
        case Mark::Arrow: return '>';
        default: return 'o';
    }
}

class CausalDag {
public:
    CausalDag(std::vector<std::pair<std::string, Role>> nodes,
              const std::vector<std::pair<NodeId, NodeId>>& edges) {
        const int n = static_cast<int>(nodes.size());
        if (n > NodeSet::max_size()) throw std::invalid_argument("too many nodes");
        labels_.reserve(nodes.size());
        roles_.reserve(nodes.size());
        for (auto& [label, role] : nodes) {
            if (label.empty()) throw std::invalid_argument("empty node label");
            for (const auto& seen : labels_)
                if (seen == label) throw std::invalid_argument("duplicate node label: " + label);
            labels_.push_back(std::move(label));
            roles_.push_back(role);
        }
        parents_.assign(static_cast<size_t>(n), NodeSet());
        children_.assign(static_cast<size_t>(n), NodeSet());
        for (auto [p, c] : edges) {
            check_node(p);
            check_node(c);
            if (p == c) throw std::invalid_argument("self edge on " + labels_[static_cast<size_t>(p)]);
            parents_[static_cast<size_t>(c)].insert(p);
            children_[static_cast<size_t>(p)].insert(c);
        }
        if (has_cycle()) throw std::invalid_argument("edge set has a directed cycle");
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    const std::string& label(NodeId v) const { check_node(v); return labels_[static_cast<size_t>(v)]; }
    Role role(NodeId v) const { check_node(v); return roles_[static_cast<size_t>(v)]; }
    const std::vector<std::string>& labels() const { return labels_; }

    NodeSet parents(NodeId v) const { check_node(v); return parents_[static_cast<size_t>(v)]; }
    NodeSet children(NodeId v) const { check_node(v); return children_[static_cast<size_t>(v)]; }
    bool has_edge(NodeId p, NodeId c) const { check_node(p); return children_[static_cast<size_t>(p)].contains(c); }

    int edge_count() const {
        int total = 0;
        for (const auto& c : children_) total += c.size();
        return total;
    }

    NodeSet nodes_with_role(Role r) const {
        NodeSet s;
        for (int v = 0; v < node_count(); ++v)
            if (roles_[static_cast<size_t>(v)] == r) s.insert(v);
        return s;
    }
    NodeSet observed() const { return nodes_with_role(Role::Observed); }
    NodeSet latent() const { return nodes_with_role(Role::Latent); }
    NodeSet selection() const { return nodes_with_role(Role::Selection); }

    NodeId index_of(const std::string& label) const {
        for (int v = 0; v < node_count(); ++v)
            if (labels_[static_cast<size_t>(v)] == label) return v;
        throw std::invalid_argument("unknown node label: " + label);
    }

    bool operator==(const CausalDag& o) const {
        return labels_ == o.labels_ && roles_ == o.roles_ && children_ == o.children_;
    }

    void check_node(NodeId v) const {
        if (v < 0 || v >= node_count()) throw std::invalid_argument("node index out of range: " + std::to_string(v));
    }

private:
    bool has_cycle() const {
        // Kahn peel; anything left over sits on a cycle.
        const int n = node_count();
        std::vector<int> indeg(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) indeg[static_cast<size_t>(v)] = parents_[static_cast<size_t>(v)].size();
        std::vector<NodeId> queue;
        for (int v = 0; v < n; ++v)
            if (indeg[static_cast<size_t>(v)] == 0) queue.push_back(v);
        int removed = 0;
        while (!queue.empty()) {
            NodeId v = queue.back();
            queue.pop_back();
            ++removed;
            for (NodeId c : children_[static_cast<size_t>(v)])
                if (--indeg[static_cast<size_t>(c)] == 0) queue.push_back(c);
        }
        return removed != n;
    }

    std::vector<std::string> labels_;
    std::vector<Role> roles_;
    std::vector<NodeSet> parents_;
    std::vector<NodeSet> children_;
};

class MixedGraph {
public:
    explicit MixedGraph(std::vector<std::string> labels) : labels_(std::move(labels)) {
        const int n = node_count();
        if (n > NodeSet::max_size()) throw std::invalid_argument("too many nodes");
        for (size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) throw std::invalid_argument("empty node label");
            for (size_t j = 0; j < i; ++j)
                if (labels_[j] == labels_[i]) throw std::invalid_argument("duplicate node label: " + labels_[i]);
        }
        adj_.assign(static_cast<size_t>(n), NodeSet());
        marks_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), Mark::Circle);
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    const std::string& label(NodeId v) const { check_node(v); return labels_[static_cast<size_t>(v)]; }
    const std::vector<std::string>& labels() const { return labels_; }

    NodeId index_of(const std::string& label) const {
        for (int v = 0; v < node_count(); ++v)
            if (labels_[static_cast<size_t>(v)] == label) return v;
        throw std::invalid_argument("unknown node label: " + label);
    }

    bool adjacent(NodeId a, NodeId b) const { check_node(a); return adj_[static_cast<size_t>(a)].contains(b); }
    NodeSet neighbors(NodeId v) const { check_node(v); return adj_[static_cast<size_t>(v)]; }

    void add_edge(NodeId a, NodeId b, Mark at_a, Mark at_b) {
        check_node(a);
        check_node(b);
        if (a == b) throw std::invalid_argument("self edge on " + labels_[static_cast<size_t>(a)]);
        if (adjacent(a, b)) throw std::invalid_argument("duplicate edge " + labels_[static_cast<size_t>(a)] + " " + labels_[static_cast<size_t>(b)]);
        adj_[static_cast<size_t>(a)].insert(b);
        adj_[static_cast<size_t>(b)].insert(a);
        at(a, b) = at_a;
        at(b, a) = at_b;
    }

    void remove_edge(NodeId a, NodeId b) {
        require_edge(a, b);
        adj_[static_cast<size_t>(a)].erase(b);
        adj_[static_cast<size_t>(b)].erase(a);
    }

    // Mark at `a` on the edge between a and b.
    Mark mark_at(NodeId a, NodeId b) const {
        require_edge(a, b);
        return marks_[static_cast<size_t>(a) * static_cast<size_t>(node_count()) + static_cast<size_t>(b)];
    }

    void set_mark(NodeId a, NodeId b, Mark m) {
        require_edge(a, b);
        at(a, b) = m;
    }

    // Edges as (a, b) with a < b.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> es;
        for (int a = 0; a < node_count(); ++a)
            for (NodeId b : adj_[static_cast<size_t>(a)])
                if (a < b) es.emplace_back(a, b);
        return es;
    }

    int edge_count() const {
        int total = 0;
        for (const auto& s : adj_) total += s.size();
        return total / 2;
    }

    // Directed edge a -> b: tail at a, arrow at b.
    bool directed_edge(NodeId a, NodeId b) const {
        return adjacent(a, b) && mark_at(a, b) == Mark::Tail && mark_at(b, a) == Mark::Arrow;
    }

    bool operator==(const MixedGraph& o) const {
        if (labels_ != o.labels_ || adj_ != o.adj_) return false;
        for (int a = 0; a < node_count(); ++a)
            for (NodeId b : adj_[static_cast<size_t>(a)])
                if (mark_at(a, b) != o.mark_at(a, b)) return false;
        return true;
    }

    void check_node(NodeId v) const {
        if (v < 0 || v >= node_count()) throw std::invalid_argument("node index out of range: " + std::to_string(v));
    }

private:
    void require_edge(NodeId a, NodeId b) const {
        if (!adjacent(a, b)) throw std::invalid_argument("no edge between " + labels_[static_cast<size_t>(a)] + " and " + labels_[static_cast<size_t>(b)]);
    }
    Mark& at(NodeId a, NodeId b) {
        return marks_[static_cast<size_t>(a) * static_cast<size_t>(node_count()) + static_cast<size_t>(b)];
    }

    std::vector<std::string> labels_;
    std::vector<NodeSet> adj_;
    std::vector<Mark> marks_;
};

}  // namespace loci
