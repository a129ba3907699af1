#include <gtest/gtest.h>

#include <string>

#include "loci/fixtures.hpp"
#include "loci/graph_io.hpp"
#include "loci/io_json.hpp"
#include "loci/oracle.hpp"

using namespace loci;

TEST(GraphText, DagRoundTrip) {
    const std::string text =
        "node X\n"
        "latent L\n"
        "selection S\n"
        "node Y\n"
        "edge X -> Y\n"
        "edge L -> X\n"
        "edge L -> Y\n"
        "edge Y -> S\n";
    CausalDag g = parse_dag(text);
    EXPECT_EQ(g.node_count(), 4);
    EXPECT_EQ(g.role(g.index_of("L")), Role::Latent);
    EXPECT_EQ(g.role(g.index_of("S")), Role::Selection);
    EXPECT_EQ(parse_dag(format_dag(g)), g);
}

TEST(GraphText, MixedRoundTripAndMarkSides) {
    const std::string text =
        "node A\n"
        "node B\n"
        "node C\n"
        "edge A o> B\n"
        "edge B -- C\n";
    MixedGraph g = parse_mixed(text);
    EXPECT_EQ(g.mark_at(0, 1), Mark::Circle);  // first mark char belongs to the left node
    EXPECT_EQ(g.mark_at(1, 0), Mark::Arrow);
    EXPECT_EQ(g.mark_at(1, 2), Mark::Tail);
    EXPECT_EQ(parse_mixed(format_mixed(g)), g);
}

TEST(GraphText, CommentsAndBlankLines) {
    CausalDag g = parse_dag("# a comment\nnode A\n\nnode B  # trailing\nedge A -> B\n");
    EXPECT_EQ(g.node_count(), 2);
    EXPECT_TRUE(g.has_edge(0, 1));
}

TEST(GraphText, ErrorsCarryLineNumbers) {
    try {
        parse_dag("node A\nfrob A\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line_no, 2);
        EXPECT_NE(std::string(e.what()).find("unknown directive"), std::string::npos);
    }
    try {
        parse_dag("node A\nnode B\nedge A ?> B\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line_no, 3);
    }
    EXPECT_THROW(parse_dag("node A\nedge A -> B\n"), ParseError);   // unknown node
    EXPECT_THROW(parse_dag("node A\nnode B\nedge A o> B\n"), ParseError);  // not directed
    EXPECT_THROW(parse_dag("node A\nnode B\nedge A -> B\nedge B -> A\n"), ParseError);  // cycle
    EXPECT_THROW(parse_mixed("latent L\n"), ParseError);
    EXPECT_THROW(parse_mixed("node A\nnode B\nedge A o> B\nedge B o- A\n"), ParseError);  // duplicate edge
}

TEST(GraphText, DotExportShapes) {
    CausalDag dag = parse_dag("node X\nlatent L\nedge L -> X\n");
    std::string dot = to_dot(dag);
    EXPECT_NE(dot.find("\"L\" [style=dashed]"), std::string::npos);
    EXPECT_NE(dot.find("\"L\" -> \"X\""), std::string::npos);

    MixedGraph g = parse_mixed("node A\nnode B\nedge A o> B\n");
    std::string mdot = to_dot(g);
    EXPECT_NE(mdot.find("arrowtail=odot"), std::string::npos);
    EXPECT_NE(mdot.find("arrowhead=normal"), std::string::npos);
}

TEST(FactLog, RoundTripAllVerbs) {
    const std::vector<std::string> labels{"X", "Y", "Z", "W"};
    std::vector<CiFact> facts;
    CiFact a;
    a.query = CiQuery(0, 1, NodeSet::of({2}));
    a.independent = true;
    a.minimal = true;
    a.destroyers = NodeSet::of({3});
    facts.push_back(a);
    CiFact b;
    b.query = CiQuery(0, 3, NodeSet());
    b.exhaustive = true;
    facts.push_back(b);
    CiFact c;
    c.query = CiQuery(1, 2, NodeSet::of({0, 3}));
    facts.push_back(c);  // plain dependence record

    const std::string text = format_ci_facts(facts, labels);
    EXPECT_NE(text.find("indep X Y | Z minimal destroyers=W"), std::string::npos);
    EXPECT_NE(text.find("nosep X W"), std::string::npos);
    EXPECT_NE(text.find("dep Y Z | X,W"), std::string::npos);

    auto parsed = parse_ci_facts(text, labels);
    ASSERT_EQ(parsed.size(), 3u);
    EXPECT_EQ(parsed[0].query, facts[0].query);
    EXPECT_TRUE(parsed[0].minimal);
    EXPECT_EQ(parsed[0].destroyers, facts[0].destroyers);
    EXPECT_TRUE(parsed[1].exhaustive);
    EXPECT_FALSE(parsed[1].independent);
    EXPECT_EQ(parsed[2].query.z, NodeSet::of({0, 3}));
}

TEST(FactLog, CommentsAndErrors) {
    const std::vector<std::string> labels{"X", "Y", "Z"};
    auto facts = parse_ci_facts("# log\n\nindep X Y | destroyers=\n", labels);
    ASSERT_EQ(facts.size(), 1u);
    EXPECT_TRUE(facts[0].query.z.empty());

    EXPECT_THROW(parse_ci_facts("indep X Q |\n", labels), ParseError);
    EXPECT_THROW(parse_ci_facts("indep X X |\n", labels), ParseError);
    EXPECT_THROW(parse_ci_facts("indep X Y | X\n", labels), ParseError);
    EXPECT_THROW(parse_ci_facts("indep X Y | Z destroyers=Z\n", labels), ParseError);
    EXPECT_THROW(parse_ci_facts("dep X Y | Z minimal\n", labels), ParseError);  // minimal needs indep
    EXPECT_THROW(parse_ci_facts("wat X Y | Z\n", labels), ParseError);
    try {
        parse_ci_facts("indep X Y |\nnosep X\n", labels);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line_no, 2);
    }
}

TEST(JsonExport, GraphShapes) {
    MixedGraph g = parse_mixed("node A\nnode B\nedge A o> B\n");
    nlohmann::json j = to_json(g);
    EXPECT_EQ(j["nodes"].size(), 2u);
    ASSERT_EQ(j["edges"].size(), 1u);
    EXPECT_EQ(j["edges"][0]["mark_at_a"], "o");
    EXPECT_EQ(j["edges"][0]["mark_at_b"], ">");

    CausalDag dag = fixture_dag("discriminating_path");
    nlohmann::json jd = to_json(dag);
    EXPECT_EQ(jd["nodes"].size(), 6u);
    int latents = 0;
    for (const auto& node : jd["nodes"])
        if (node["role"] == "latent") ++latents;
    EXPECT_EQ(latents, 2);
    EXPECT_EQ(jd["edges"].size(), 6u);
}

TEST(Fixtures, AllParseAndLookupWorks) {
    for (const auto& f : fixtures()) {
        CausalDag dag = fixture_dag(f.name);
        EXPECT_GE(dag.node_count(), 4) << f.name;
    }
    EXPECT_THROW(fixture_dag("no_such_thing"), std::invalid_argument);
}
