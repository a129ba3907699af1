#pragma once

// JSON views of the core structures, for tooling that would rather not parse
// the native text formats. Everything is plain data out; there is no JSON
// input path.

#include <sstream>
#include <string>

#include "json.hpp"
#include "loci/fci.hpp"
#include "loci/graph.hpp"
#include "loci/loci.hpp"
#include "loci/oracle.hpp"

namespace loci {

inline nlohmann::json to_json(const MixedGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId v = 0; v < g.node_count(); ++v) nodes.push_back(g.label(v));
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) {
        edges.push_back({{"a", g.label(a)},
                         {"b", g.label(b)},
                         {"mark_at_a", std::string(1, mark_char(g.mark_at(a, b)))},
                         {"mark_at_b", std::string(1, mark_char(g.mark_at(b, a)))}});
    }
    return {{"nodes", nodes}, {"edges", edges}};
}

inline nlohmann::json to_json(const CausalDag& dag) {
    auto role_name = [](Role r) {
        switch (r) {
            case Role::Latent: return "latent";
            case Role::Selection: return "selection";
            default: return "observed";
        }
    };
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId v = 0; v < dag.node_count(); ++v)
        nodes.push_back({{"name", dag.label(v)}, {"role", role_name(dag.role(v))}});
    nlohmann::json edges = nlohmann::json::array();
    for (NodeId v = 0; v < dag.node_count(); ++v)
        for (NodeId c : dag.children(v)) edges.push_back({dag.label(v), dag.label(c)});
    return {{"nodes", nodes}, {"edges", edges}};
}

inline nlohmann::json to_json(const LociResult& r) {
    nlohmann::json facts = nlohmann::json::array();
    for (const auto& f : r.facts) facts.push_back(format_ci_fact(f, r.statements.labels()));
    nlohmann::json statements = nlohmann::json::array();
    std::istringstream log(r.statements.statement_log());
    for (std::string line; std::getline(log, line);) statements.push_back(line);
    nlohmann::json blocking = nlohmann::json::array();
    for (const auto& b : r.blocking_log) blocking.push_back(b);
    return {{"pag", to_json(r.pag)}, {"facts", facts}, {"statements", statements}, {"blocking", blocking}};
}

inline nlohmann::json to_json(const FciResult& r) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& line : r.rule_log) rules.push_back(line);
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [rule, c] : r.rule_counts) counts[rule] = c;
    nlohmann::json sepsets = nlohmann::json::array();
    const int n = r.pag.node_count();
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            const auto& cell = r.sepsets[static_cast<size_t>(a) * n + b];
            if (!cell) continue;
            nlohmann::json z = nlohmann::json::array();
            for (NodeId v : *cell) z.push_back(r.pag.label(v));
            sepsets.push_back({{"a", r.pag.label(a)}, {"b", r.pag.label(b)}, {"given", z}});
        }
    }
    return {{"pag", to_json(r.pag)}, {"sepsets", sepsets}, {"rules", rules}, {"rule_counts", counts}};
}

}  // namespace loci
