#pragma once

// Small named causal systems with hand-checked expected output, shared by
// the test suite and the CLI (--fixture). Sources use the regular graph text
// format, so each doubles as an input example.

#include <string>
#include <vector>

#include "loci/graph.hpp"
#include "loci/graph_io.hpp"

namespace loci {

struct Fixture {
    const char* name;
    const char* summary;
    const char* dag;
};

inline const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> all = {
        {"y_structure",
         "two independent causes of X, X causes Y; Z => Y becomes established",
         "node W1\n"
         "node W2\n"
         "node X\n"
         "node Y\n"
         "edge W1 -> X\n"
         "edge W2 -> X\n"
         "edge X -> Y\n"},

        {"example_two",
         "X drives Y through both Z and W; X => Y or X => S stays disjoined",
         "node X\n"
         "node Z\n"
         "node W\n"
         "node Y\n"
         "edge X -> Z\n"
         "edge X -> W\n"
         "edge Z -> Y\n"
         "edge W -> Y\n"},

        {"discriminating_path",
         "hidden confounders force a discriminating path; the blocking node gets a tail",
         "node X\n"
         "node Z1\n"
         "node Z\n"
         "node Y\n"
         "latent L1\n"
         "latent L2\n"
         "edge L1 -> X\n"
         "edge L1 -> Z1\n"
         "edge L2 -> Z1\n"
         "edge L2 -> Z\n"
         "edge Z1 -> Y\n"
         "edge Z -> Y\n"},

        {"discriminating_collider",
         "as discriminating_path but Z confounded with Y; the blocking node is a collider",
         "node X\n"
         "node Z1\n"
         "node Z\n"
         "node Y\n"
         "latent L1\n"
         "latent L2\n"
         "latent L3\n"
         "edge L1 -> X\n"
         "edge L1 -> Z1\n"
         "edge L2 -> Z1\n"
         "edge L2 -> Z\n"
         "edge L3 -> Z\n"
         "edge L3 -> Y\n"
         "edge Z1 -> Y\n"},

        {"selection_cycle",
         "two selection effects tie four variables into an undirected cycle",
         "node A\n"
         "node B\n"
         "node C\n"
         "node D\n"
         "node E\n"
         "node F\n"
         "selection S1\n"
         "selection S2\n"
         "edge A -> S1\n"
         "edge B -> S1\n"
         "edge C -> S2\n"
         "edge D -> S2\n"
         "edge B -> C\n"
         "edge D -> A\n"
         "edge E -> B\n"
         "edge F -> E\n"},

        {"tail_relay",
         "selection tails relay along E and F until only a tail at E explains G",
         "node A\n"
         "node B\n"
         "node C\n"
         "node D\n"
         "node E\n"
         "node F\n"
         "node G\n"
         "node M\n"
         "node P\n"
         "selection S1\n"
         "selection S2\n"
         "edge A -> S1\n"
         "edge B -> S1\n"
         "edge C -> S2\n"
         "edge D -> S2\n"
         "edge B -> C\n"
         "edge D -> A\n"
         "edge E -> B\n"
         "edge E -> P\n"
         "edge E -> F\n"
         "edge E -> G\n"
         "edge P -> B\n"
         "edge P -> F\n"
         "edge F -> G\n"
         "edge B -> G\n"
         "edge M -> G\n"},
    };
    return all;
}

inline CausalDag fixture_dag(const std::string& name) {
    for (const auto& f : fixtures())
        if (name == f.name) return parse_dag(f.dag);
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace loci
