#pragma once

// Line-oriented text format shared by DAGs and mixed graphs:
//
//   # comment
//   node X1
//   latent L1
//   selection S1
//   edge X1 -> L1     directed (DAG files)
//   edge X1 o> X2     mark pair: first char is the mark at the left node
//   edge X1 -- X2     marks: '-' tail, '>' arrow, 'o' circle
//
// plus DOT export for rendering (arrowhead shapes none/normal/odot).

#include <sstream>
#include <string>
#include <vector>

#include "loci/graph.hpp"

namespace loci {

namespace detail {

inline bool parse_mark(char c, Mark& m) {
    switch (c) {
        case '-': m = Mark::Tail; return true;
        case '>': m = Mark::Arrow; return true;
        case 'o': m = Mark::Circle; return true;
        default: return false;
    }
}

struct RawGraph {
    std::vector<std::pair<std::string, Role>> nodes;
    struct RawEdge {
        std::string a, b;
        Mark at_a, at_b;
        int line;
    };
    std::vector<RawEdge> edges;

    NodeId index_of(const std::string& label, int line) const {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].first == label) return static_cast<NodeId>(i);
        throw ParseError("edge references unknown node '" + label + "'", line);
    }
};

inline RawGraph parse_raw(const std::string& text) {
    RawGraph raw;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "node" || kw == "latent" || kw == "selection") {
            if (toks.size() != 2) throw ParseError("expected '" + kw + " <label>'", line_no);
            Role r = kw == "node" ? Role::Observed : kw == "latent" ? Role::Latent : Role::Selection;
            raw.nodes.emplace_back(toks[1], r);
        } else if (kw == "edge") {
            if (toks.size() != 4) throw ParseError("expected 'edge <a> <marks> <b>'", line_no);
            const std::string& marks = toks[2];
            Mark at_a, at_b;
            if (marks.size() != 2 || !parse_mark(marks[0], at_a) || !parse_mark(marks[1], at_b))
                throw ParseError("bad mark pair '" + marks + "' (marks are -, >, o)", line_no);
            raw.edges.push_back({toks[1], toks[3], at_a, at_b, line_no});
        } else {
            throw ParseError("unknown directive '" + kw + "'", line_no);
        }
    }
    return raw;
}

}  // namespace detail

inline CausalDag parse_dag(const std::string& text) {
    auto raw = detail::parse_raw(text);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : raw.edges) {
        if (e.at_a != Mark::Tail || e.at_b != Mark::Arrow)
            throw ParseError("DAG edges must be directed ('->')", e.line);
        edges.emplace_back(raw.index_of(e.a, e.line), raw.index_of(e.b, e.line));
    }
    try {
        return CausalDag(std::move(raw.nodes), edges);
    } catch (const std::invalid_argument& err) {
        throw ParseError(err.what(), 0);
    }
}

inline MixedGraph parse_mixed(const std::string& text) {
    auto raw = detail::parse_raw(text);
    std::vector<std::string> labels;
    for (auto& [label, role] : raw.nodes) {
        if (role != Role::Observed)
            throw ParseError("mixed graphs have observed nodes only ('" + label + "')", 0);
        labels.push_back(label);
    }
    try {
        MixedGraph g(std::move(labels));
        for (const auto& e : raw.edges)
            g.add_edge(raw.index_of(e.a, e.line), raw.index_of(e.b, e.line), e.at_a, e.at_b);
        return g;
    } catch (const std::invalid_argument& err) {
        throw ParseError(err.what(), 0);
    }
}

inline std::string format_dag(const CausalDag& g) {
    std::ostringstream out;
    for (int v = 0; v < g.node_count(); ++v) {
        switch (g.role(v)) {
            case Role::Observed: out << "node "; break;
            case Role::Latent: out << "latent "; break;
            case Role::Selection: out << "selection "; break;
        }
        out << g.label(v) << '\n';
    }
    for (int v = 0; v < g.node_count(); ++v)
        for (NodeId c : g.children(v)) out << "edge " << g.label(v) << " -> " << g.label(c) << '\n';
    return out.str();
}

inline std::string format_mixed(const MixedGraph& g) {
    std::ostringstream out;
    for (int v = 0; v < g.node_count(); ++v) out << "node " << g.label(v) << '\n';
    for (auto [a, b] : g.edges())
        out << "edge " << g.label(a) << ' ' << mark_char(g.mark_at(a, b)) << mark_char(g.mark_at(b, a)) << ' '
            << g.label(b) << '\n';
    return out.str();
}

namespace detail {
inline const char* dot_arrow(Mark m) {
    switch (m) {
        case Mark::Arrow: return "normal";
        case Mark::Tail: return "none";
        default: return "odot";
    }
}
}  // namespace detail

inline std::string to_dot(const CausalDag& g) {
    std::ostringstream out;
    out << "digraph g {\n";
    for (int v = 0; v < g.node_count(); ++v) {
        out << "  \"" << g.label(v) << "\"";
        if (g.role(v) == Role::Latent) out << " [style=dashed]";
        if (g.role(v) == Role::Selection) out << " [style=filled, fillcolor=lightgray]";
        out << ";\n";
    }
    for (int v = 0; v < g.node_count(); ++v)
        for (NodeId c : g.children(v)) out << "  \"" << g.label(v) << "\" -> \"" << g.label(c) << "\";\n";
    out << "}\n";
    return out.str();
}

inline std::string to_dot(const MixedGraph& g) {
    std::ostringstream out;
    out << "digraph g {\n  edge [dir=both];\n";
    for (int v = 0; v < g.node_count(); ++v) out << "  \"" << g.label(v) << "\";\n";
    for (auto [a, b] : g.edges())
        out << "  \"" << g.label(a) << "\" -> \"" << g.label(b) << "\" [arrowtail="
            << detail::dot_arrow(g.mark_at(a, b)) << ", arrowhead=" << detail::dot_arrow(g.mark_at(b, a)) << "];\n";
    out << "}\n";
    return out.str();
}

}  // namespace loci
