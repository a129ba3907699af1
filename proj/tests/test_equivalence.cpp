#include <gtest/gtest.h>

#include <set>
#include <string>

#include "loci/equivalence.hpp"
#include "loci/fixtures.hpp"
#include "loci/graph_io.hpp"
#include "loci/projection.hpp"
#include "loci/random_dag.hpp"
#include "support/brute.hpp"

using namespace loci;

namespace {

MixedGraph three_node(Mark ab_a, Mark ab_b, Mark bc_b, Mark bc_c) {
    MixedGraph g({"A", "B", "C"});
    g.add_edge(0, 1, ab_a, ab_b);
    g.add_edge(1, 2, bc_b, bc_c);
    return g;
}

}  // namespace

TEST(Equivalence, SingleEdgeClassHasAllFourForms) {
    MixedGraph g({"A", "B"});
    g.add_edge(0, 1, Mark::Tail, Mark::Arrow);
    auto cls = enumerate_equivalent_mags(g);
    EXPECT_EQ(cls.size(), 4u);  // ->, <-, <->, --
    MixedGraph pag = invariant_marks(g);
    EXPECT_EQ(pag.mark_at(0, 1), Mark::Circle);
    EXPECT_EQ(pag.mark_at(1, 0), Mark::Circle);
}

TEST(Equivalence, ChainsEquivalentColliderNot) {
    MixedGraph chain = three_node(Mark::Tail, Mark::Arrow, Mark::Tail, Mark::Arrow);     // A -> B -> C
    MixedGraph rev = three_node(Mark::Arrow, Mark::Tail, Mark::Arrow, Mark::Tail);       // A <- B <- C
    MixedGraph fork = three_node(Mark::Arrow, Mark::Tail, Mark::Tail, Mark::Arrow);      // A <- B -> C
    MixedGraph collider = three_node(Mark::Tail, Mark::Arrow, Mark::Arrow, Mark::Tail);  // A -> B <- C
    EXPECT_TRUE(markov_equivalent(chain, rev));
    EXPECT_TRUE(markov_equivalent(chain, fork));
    EXPECT_FALSE(markov_equivalent(chain, collider));
    EXPECT_FALSE(markov_equivalent(rev, collider));
}

TEST(Equivalence, ColliderStaysDirectedInEveryMember) {
    MixedGraph mag = project_to_mag(fixture_dag("y_structure"));
    auto cls = enumerate_equivalent_mags(mag);
    EXPECT_EQ(cls.size(), 4u);  // both cause edges vary between -> and <->
    MixedGraph pag = invariant_marks(mag);
    MixedGraph expected = parse_mixed(
        "node W1\nnode W2\nnode X\nnode Y\n"
        "edge W1 o> X\n"
        "edge W2 o> X\n"
        "edge X -> Y\n");
    EXPECT_EQ(pag, expected);
}

TEST(Equivalence, GuardsRejectBadInput) {
    MixedGraph a({"A", "B"});
    a.add_edge(0, 1, Mark::Tail, Mark::Arrow);
    MixedGraph other({"A", "C"});
    other.add_edge(0, 1, Mark::Tail, Mark::Arrow);
    EXPECT_THROW(markov_equivalent(a, other), std::invalid_argument);

    MixedGraph cyc({"A", "B", "C"});
    cyc.add_edge(0, 1, Mark::Tail, Mark::Arrow);
    cyc.add_edge(1, 2, Mark::Tail, Mark::Arrow);
    cyc.add_edge(2, 0, Mark::Arrow, Mark::Arrow);
    EXPECT_THROW(markov_equivalent(cyc, cyc), std::invalid_argument);  // not ancestral
    EXPECT_THROW(enumerate_equivalent_mags(cyc), std::invalid_argument);

    // ancestral but not maximal: X and Y are inseparable yet nonadjacent
    MixedGraph nonmax({"X", "B1", "B2", "Y"});
    nonmax.add_edge(0, 1, Mark::Arrow, Mark::Arrow);
    nonmax.add_edge(1, 2, Mark::Arrow, Mark::Arrow);
    nonmax.add_edge(2, 3, Mark::Arrow, Mark::Arrow);
    nonmax.add_edge(1, 3, Mark::Tail, Mark::Arrow);
    nonmax.add_edge(2, 0, Mark::Tail, Mark::Arrow);
    EXPECT_THROW(enumerate_equivalent_mags(nonmax), std::invalid_argument);

    MixedGraph wide({"A", "B", "C", "D", "E", "F"});
    EXPECT_THROW(enumerate_equivalent_mags(wide), ResourceLimitError);
}

TEST(Equivalence, MatchesBruteForceEnumeration) {
    static constexpr std::pair<Mark, Mark> kEdgeKinds[4] = {{Mark::Tail, Mark::Arrow},
                                                            {Mark::Arrow, Mark::Tail},
                                                            {Mark::Arrow, Mark::Arrow},
                                                            {Mark::Tail, Mark::Tail}};
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 40 && checked < 12; ++seed) {
        RandomDagSpec spec;
        spec.n_observed = 4 + static_cast<int>(seed % 2);
        spec.n_latent = static_cast<int>(seed % 3);
        spec.n_selection = static_cast<int>(seed % 2);
        MixedGraph mag = project_to_mag(random_dag(spec, seed * 613 + 5));
        const auto edges = mag.edges();
        if (edges.size() > 5 || edges.empty()) continue;  // keep the 4^E sweep small
        ++checked;

        const auto want_sig = brute::separation_signature(mag);
        std::set<std::string> brute_members;
        MixedGraph cand(mag.labels());
        for (auto [x, y] : edges) cand.add_edge(x, y, Mark::Circle, Mark::Circle);
        std::vector<int> odo(edges.size(), 0);
        while (true) {
            for (size_t i = 0; i < edges.size(); ++i) {
                cand.set_mark(edges[i].first, edges[i].second, kEdgeKinds[odo[i]].first);
                cand.set_mark(edges[i].second, edges[i].first, kEdgeKinds[odo[i]].second);
            }
            if (brute::is_ancestral(cand) && brute::is_maximal(cand) &&
                brute::separation_signature(cand) == want_sig)
                brute_members.insert(format_mixed(cand));
            size_t i = edges.size();
            while (i > 0 && odo[i - 1] == 3) odo[--i] = 0;
            if (i == 0) break;
            ++odo[i - 1];
        }

        std::set<std::string> lib_members;
        for (const auto& member : enumerate_equivalent_mags(mag)) lib_members.insert(format_mixed(member));
        EXPECT_EQ(lib_members, brute_members) << "seed " << seed;
        EXPECT_TRUE(lib_members.count(format_mixed(mag))) << "class must contain the graph itself";

        // the invariant-mark fold must agree with a fold over the brute class
        MixedGraph pag = invariant_marks(mag);
        ASSERT_FALSE(brute_members.empty());
        std::vector<MixedGraph> cls;
        for (const auto& text : brute_members) cls.push_back(parse_mixed(text));
        for (auto [x, y] : edges) {
            Mark at_x = cls.front().mark_at(x, y), at_y = cls.front().mark_at(y, x);
            for (const auto& member : cls) {
                if (member.mark_at(x, y) != at_x) at_x = Mark::Circle;
                if (member.mark_at(y, x) != at_y) at_y = Mark::Circle;
            }
            EXPECT_EQ(pag.mark_at(x, y), at_x);
            EXPECT_EQ(pag.mark_at(y, x), at_y);
        }
    }
    EXPECT_GE(checked, 5) << "not enough small graphs sampled to make this test meaningful";
}
