// Random-system generator and cross-validation campaign: seeded determinism,
// structural guarantees of the generator knobs, and a small clean campaign
// whose report is byte-stable across runs.

#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "loci/campaign.hpp"
#include "loci/graph_io.hpp"
#include "loci/random_dag.hpp"

namespace loci {
namespace {

TEST(RandomDag, SameSeedSameGraphDifferentSeedDifferentGraph) {
    RandomDagSpec spec;
    spec.n_observed = 6;
    spec.n_latent = 2;
    spec.n_selection = 1;
    spec.edge_probability = 0.4;

    CausalDag a = random_dag(spec, 42);
    CausalDag b = random_dag(spec, 42);
    CausalDag c = random_dag(spec, 43);
    EXPECT_TRUE(a == b);
    EXPECT_NE(format_dag(a), format_dag(c));
}

TEST(RandomDag, RolesArePlacedAndToppedUp) {
    RandomDagSpec spec;
    spec.n_observed = 4;
    spec.n_latent = 2;
    spec.n_selection = 2;
    spec.edge_probability = 0.0;  // every edge below comes from the top-up passes

    CausalDag dag = random_dag(spec, 11);
    ASSERT_EQ(dag.node_count(), 8);
    EXPECT_EQ(dag.label(0), "L1");
    EXPECT_EQ(dag.label(2), "X1");
    EXPECT_EQ(dag.label(6), "S1");

    // Latents are topped up to two observed children; the later selection
    // top-up may then also pick a latent as a parent, so only the observed
    // children are counted here.
    for (NodeId v : dag.latent()) {
        int observed_children = 0;
        for (NodeId c : dag.children(v))
            if (dag.role(c) == Role::Observed) ++observed_children;
        EXPECT_GE(observed_children, 2) << dag.label(v);
    }
    for (NodeId v : dag.selection()) {
        EXPECT_GE(dag.parents(v).size(), 2u) << dag.label(v);
        for (NodeId p : dag.parents(v)) EXPECT_NE(dag.role(p), Role::Selection);
        EXPECT_TRUE(dag.children(v).empty()) << "selection sinks must stay childless";
    }
}

TEST(RandomDag, SinkFlagKeepsSelectionChildless) {
    RandomDagSpec spec;
    spec.n_observed = 5;
    spec.n_selection = 2;
    spec.edge_probability = 0.6;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CausalDag dag = random_dag(spec, seed);
        for (NodeId v : dag.selection()) EXPECT_TRUE(dag.children(v).empty()) << "seed " << seed;
    }
}

TEST(RandomDag, SelectionAnywhereCanHaveChildren) {
    RandomDagSpec spec;
    spec.n_observed = 3;
    spec.n_selection = 2;
    spec.edge_probability = 1.0;
    spec.selection_sinks = false;

    bool some_child = false;
    for (std::uint64_t seed = 1; seed <= 10 && !some_child; ++seed) {
        CausalDag dag = random_dag(spec, seed);
        for (NodeId v : dag.selection())
            if (!dag.children(v).empty()) some_child = true;
    }
    EXPECT_TRUE(some_child);
}

TEST(RandomDag, EdgeProbabilityExtremes) {
    RandomDagSpec spec;
    spec.n_observed = 5;
    spec.edge_probability = 1.0;
    EXPECT_EQ(random_dag(spec, 3).edge_count(), 10);
    spec.edge_probability = 0.0;
    EXPECT_EQ(random_dag(spec, 3).edge_count(), 0);
}

TEST(RandomDag, RejectsBadSpecs) {
    RandomDagSpec spec;
    spec.n_observed = 1;
    EXPECT_THROW(random_dag(spec, 1), std::invalid_argument);
    spec.n_observed = 4;
    spec.n_latent = -1;
    EXPECT_THROW(random_dag(spec, 1), std::invalid_argument);
    spec.n_latent = 0;
    spec.edge_probability = 1.5;
    EXPECT_THROW(random_dag(spec, 1), std::invalid_argument);
}

TEST(Rng, DeterministicStream) {
    detail::Rng a(5), b(5), c(6);
    EXPECT_EQ(a.raw(), b.raw());
    EXPECT_NE(b.raw(), c.raw());
    for (int i = 0; i < 100; ++i) {
        int v = a.below(10);
        EXPECT_GE(v, 0);
        EXPECT_LT(v, 10);
        EXPECT_FALSE(a.chance(0.0));
        EXPECT_TRUE(a.chance(1.0));
    }
}

TEST(Campaign, SmallRunAgreesEverywhereAndIsByteStable) {
    CampaignSpec spec;
    spec.trials = 12;
    spec.seed = 5;
    spec.min_observed = 4;
    spec.max_observed = 5;
    spec.max_latent = 2;
    spec.max_selection = 1;
    spec.edge_probabilities = {0.3};
    spec.invariant_max_observed = 4;

    CampaignResult res = run_campaign(spec);
    EXPECT_TRUE(res.ok());
    EXPECT_EQ(res.trials, 12);
    ASSERT_EQ(res.report.size(), 13u);  // one line per trial plus the summary
    EXPECT_EQ(res.report.back(),
              "campaign: 12 trials, 0 failures, " + std::to_string(res.invariant_checked) +
                  " brute-force class checks");
    EXPECT_FALSE(res.rule_totals.empty());

    CampaignResult again = run_campaign(spec);
    EXPECT_EQ(again.report, res.report);

    spec.timings = true;
    CampaignResult timed = run_campaign(spec);
    ASSERT_FALSE(timed.report.empty());
    EXPECT_NE(timed.report[0].find(" ms="), std::string::npos);
}

TEST(Campaign, RejectsBadSpecs) {
    CampaignSpec spec;
    spec.trials = -1;
    EXPECT_THROW(run_campaign(spec), std::invalid_argument);
    spec.trials = 1;
    spec.max_observed = spec.min_observed - 1;
    EXPECT_THROW(run_campaign(spec), std::invalid_argument);
    spec.max_observed = spec.min_observed;
    spec.edge_probabilities.clear();
    EXPECT_THROW(run_campaign(spec), std::invalid_argument);
}

}  // namespace
}  // namespace loci
