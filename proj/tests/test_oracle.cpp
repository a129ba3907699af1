#include <gtest/gtest.h>

#include "loci/fixtures.hpp"
#include "loci/oracle.hpp"
#include "loci/random_dag.hpp"

using namespace loci;

TEST(DagOracle, AnswersByDSeparation) {
    DagOracle oracle(fixture_dag("y_structure"));  // W1 -> X <- W2, X -> Y
    ASSERT_EQ(oracle.variable_count(), 4);
    const NodeId w1 = 0, w2 = 1, x = 2, y = 3;
    EXPECT_EQ(oracle.labels()[static_cast<size_t>(x)], "X");
    EXPECT_TRUE(oracle.independent(w1, w2, NodeSet()));
    EXPECT_FALSE(oracle.independent(w1, w2, NodeSet::single(x)));
    EXPECT_FALSE(oracle.independent(w1, w2, NodeSet::single(y)));
    EXPECT_TRUE(oracle.independent(w1, y, NodeSet::single(x)));
    EXPECT_FALSE(oracle.independent(w1, y, NodeSet()));
}

TEST(DagOracle, ReindexesAroundLatentNodes) {
    DagOracle oracle(parse_dag("latent L\nnode A\nnode B\nedge L -> A\nedge L -> B\n"));
    ASSERT_EQ(oracle.variable_count(), 2);
    EXPECT_EQ(oracle.labels(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(oracle.dag_node(0), 1);  // A sits at DAG index 1 behind the latent
    EXPECT_EQ(oracle.dag_node(1), 2);
    EXPECT_FALSE(oracle.independent(0, 1, NodeSet()));  // confounded, and L is not addressable
    EXPECT_THROW(oracle.dag_node(2), std::invalid_argument);
    EXPECT_THROW(oracle.independent(0, 2, NodeSet()), std::invalid_argument);
    EXPECT_THROW(oracle.independent(0, 1, NodeSet::single(5)), std::invalid_argument);
}

TEST(DagOracle, AlwaysConditionsOnSelection) {
    DagOracle oracle(fixture_dag("selection_cycle"));
    ASSERT_EQ(oracle.labels()[0], "A");  // observed order A..F
    const NodeId a = 0, e = 4;
    // E -> B -> S1 <- A: the selection collider is implicitly conditioned,
    // so A and E are dependent given nothing but separable by B.
    EXPECT_FALSE(oracle.independent(a, e, NodeSet()));
    EXPECT_TRUE(oracle.independent(a, e, NodeSet::single(1)));
}

TEST(MinimalSearch, FindsSmallestSetFirst) {
    DagOracle oracle(fixture_dag("y_structure"));
    const NodeId w1 = 0, w2 = 1, x = 2, y = 3;

    auto pair_fact = find_minimal_independence(oracle, w1, w2);
    ASSERT_TRUE(pair_fact);
    EXPECT_TRUE(pair_fact->independent);
    EXPECT_TRUE(pair_fact->minimal);
    EXPECT_TRUE(pair_fact->query.z.empty());
    EXPECT_EQ(find_destroyers(oracle, *pair_fact), NodeSet::of({x, y}));

    auto w1y = find_minimal_independence(oracle, w1, y);
    ASSERT_TRUE(w1y);
    EXPECT_EQ(w1y->query.z, NodeSet::single(x));
    EXPECT_EQ(find_destroyers(oracle, *w1y), NodeSet());

    EXPECT_FALSE(find_minimal_independence(oracle, w1, x));     // adjacent, never separable
    EXPECT_FALSE(find_minimal_independence(oracle, w1, y, 0));  // budget excludes the only separator
    EXPECT_THROW(find_minimal_independence(oracle, w1, w1), std::invalid_argument);
}

TEST(MinimalSearch, MinimalityHoldsOnRandomSystems) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RandomDagSpec spec;
        spec.n_observed = 5;
        spec.n_latent = static_cast<int>(seed % 3);
        spec.n_selection = static_cast<int>(seed % 2);
        DagOracle oracle(random_dag(spec, seed * 131));
        const int m = oracle.variable_count();
        for (NodeId x = 0; x < m; ++x)
            for (NodeId y = x + 1; y < m; ++y) {
                auto f = find_minimal_independence(oracle, x, y);
                if (!f) continue;
                EXPECT_TRUE(oracle.independent(x, y, f->query.z));
                for (NodeId drop : f->query.z)
                    EXPECT_FALSE(oracle.independent(x, y, f->query.z.without(drop)))
                        << "seed " << seed << ": separating set not minimal";
                NodeSet destroyers = find_destroyers(oracle, *f);
                for (NodeId w : destroyers) EXPECT_FALSE(oracle.independent(x, y, f->query.z.with(w)));
            }
    }
}

TEST(MinimalSearch, DestroyersRequireIndependenceFact) {
    DagOracle oracle(fixture_dag("y_structure"));
    CiFact dep;
    dep.query = CiQuery(0, 2, NodeSet());
    EXPECT_THROW(find_destroyers(oracle, dep), std::invalid_argument);
}

TEST(CachingOracle, CountsAndDeduplicates) {
    DagOracle inner(fixture_dag("y_structure"));
    CachingOracle cache(inner);
    EXPECT_TRUE(cache.independent(0, 1, NodeSet()));
    EXPECT_TRUE(cache.independent(1, 0, NodeSet()));  // symmetric query hits the cache
    EXPECT_TRUE(cache.independent(0, 1, NodeSet()));
    EXPECT_EQ(cache.total_queries(), 3);
    EXPECT_EQ(cache.inner_queries(), 1);
    EXPECT_FALSE(cache.independent(0, 1, NodeSet::single(2)));
    EXPECT_EQ(cache.inner_queries(), 2);
}
