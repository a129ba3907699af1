#pragma once

// Randomized cross-validation. Each trial draws a seeded causal system,
// derives its PAG twice (statement engine and orientation-rule engine) and,
// when the graph is small enough, a third time by brute-force enumeration of
// the whole equivalence class. Any disagreement or ground-truth violation of
// a derived statement marks the trial as failed and dumps the artifacts
// needed to replay it. Reports are byte-identical for a given spec; per-trial
// timings are opt-in because they break that.

#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "loci/equivalence.hpp"
#include "loci/fci.hpp"
#include "loci/graph_io.hpp"
#include "loci/loci.hpp"
#include "loci/projection.hpp"
#include "loci/random_dag.hpp"
#include "loci/separation.hpp"

namespace loci {

struct CampaignSpec {
    int trials = 100;
    std::uint64_t seed = 1;
    int min_observed = 4;
    int max_observed = 8;
    int max_latent = 3;
    int max_selection = 2;
    std::vector<double> edge_probabilities = {0.2, 0.35, 0.5};
    bool check_invariant_marks = true;
    int invariant_max_observed = 5;  // enumeration cost grows as 4^edges
    bool timings = false;
};

struct CampaignResult {
    int trials = 0;
    int mismatches = 0;
    int invariant_checked = 0;
    std::map<std::string, int> rule_totals;
    std::vector<std::string> report;

    bool ok() const { return mismatches == 0; }
};

namespace detail {

inline bool dag_causes(const CausalDag& dag, NodeId a, NodeId b) {
    return a != b && ancestors(dag, b).contains(a);
}

inline bool dag_causes_selection(const CausalDag& dag, NodeId a) {
    for (NodeId s : dag.selection())
        if (ancestors(dag, s).contains(a)) return true;
    return false;
}

// Every established, refuted, or still-disjoined statement must hold in the
// system that generated the data. Returns human-readable violations.
inline std::vector<std::string> unsound_statements(const CausalDag& dag, const DagOracle& oracle,
                                                   const StatementList& st) {
    std::vector<std::string> bad;
    const int m = st.variable_count();
    auto causes = [&](NodeId x, NodeId y) { return dag_causes(dag, oracle.dag_node(x), oracle.dag_node(y)); };
    auto causes_sel = [&](NodeId x) { return dag_causes_selection(dag, oracle.dag_node(x)); };
    for (NodeId x = 0; x < m; ++x) {
        for (NodeId y = 0; y < m; ++y) {
            if (x == y) continue;
            Status s = st.query(x, y);
            if (s == Status::Established && !causes(x, y)) bad.push_back("established but false: " + st.atom_text(x, y));
            if (s == Status::Refuted && causes(x, y)) bad.push_back("refuted but true: " + st.atom_text(x, y));
        }
        Status s = st.query(x, kSelectionTarget);
        if (s == Status::Established && !causes_sel(x))
            bad.push_back("established but false: " + st.atom_text(x, kSelectionTarget));
        if (s == Status::Refuted && causes_sel(x))
            bad.push_back("refuted but true: " + st.atom_text(x, kSelectionTarget));
    }
    for (const auto& d : st.disjuncts()) {
        if (!d.live) continue;
        bool holds = d.selection && causes_sel(d.subject);
        for (NodeId t : d.targets) holds = holds || causes(d.subject, t);
        if (!holds) bad.push_back("no true alternative: " + st.disjunct_text(d.subject, d.targets, d.selection));
    }
    return bad;
}

}  // namespace detail

inline CampaignResult run_campaign(const CampaignSpec& spec, std::ostream* progress = nullptr) {
    if (spec.trials < 0 || spec.min_observed < 2 || spec.max_observed < spec.min_observed)
        throw std::invalid_argument("bad campaign spec");
    if (spec.edge_probabilities.empty()) throw std::invalid_argument("campaign needs edge probabilities");

    CampaignResult res;
    std::uint64_t chain = spec.seed;
    for (int t = 0; t < spec.trials; ++t) {
        const std::uint64_t trial_seed = detail::splitmix64(chain);
        detail::Rng rng(trial_seed);
        RandomDagSpec ds;
        ds.n_observed = spec.min_observed + rng.below(spec.max_observed - spec.min_observed + 1);
        ds.n_latent = rng.below(spec.max_latent + 1);
        ds.n_selection = spec.max_selection > 0 ? rng.below(spec.max_selection + 1) : 0;
        ds.edge_probability =
            spec.edge_probabilities[static_cast<size_t>(rng.below(static_cast<int>(spec.edge_probabilities.size())))];

        const auto t0 = std::chrono::steady_clock::now();
        CausalDag dag = random_dag(ds, rng.raw());
        DagOracle base(dag);
        CachingOracle oracle(base);
        LociResult lr = run_loci(oracle);
        FciResult fr = run_fci(oracle);
        for (const auto& [rule, c] : fr.rule_counts) res.rule_totals[rule] += c;

        const bool match = lr.pag == fr.pag;
        std::optional<bool> inv;
        std::optional<MixedGraph> im;
        if (spec.check_invariant_marks && ds.n_observed <= spec.invariant_max_observed) {
            im = invariant_marks(project_to_mag(dag));
            inv = (*im == fr.pag) && (*im == lr.pag);
            ++res.invariant_checked;
        }
        const auto bad = detail::unsound_statements(dag, base, lr.statements);

        std::ostringstream line;
        line << "trial " << t << " seed=" << trial_seed << " obs=" << ds.n_observed << " lat=" << ds.n_latent
             << " sel=" << ds.n_selection << " p=" << ds.edge_probability << (match ? " agree" : " MISMATCH");
        if (inv) line << (*inv ? " invariants-ok" : " INVARIANT-MISMATCH");
        if (!bad.empty()) line << " UNSOUND";
        if (spec.timings) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
            line << " ms=" << ms.count();
        }
        res.report.push_back(line.str());

        if (!match || (inv && !*inv) || !bad.empty()) {
            ++res.mismatches;
            res.report.push_back("--- ground truth ---\n" + format_dag(dag));
            res.report.push_back("--- statement engine ---\n" + format_mixed(lr.pag));
            res.report.push_back("--- rule engine ---\n" + format_mixed(fr.pag));
            if (im && inv && !*inv) res.report.push_back("--- class-invariant marks ---\n" + format_mixed(*im));
            for (const auto& b : bad) res.report.push_back("unsound: " + b);
        }
        ++res.trials;
        if (progress && (t + 1) % 50 == 0) *progress << "campaign progress: " << (t + 1) << "/" << spec.trials << "\n";
    }
    std::ostringstream tail;
    tail << "campaign: " << res.trials << " trials, " << res.mismatches << " failures, " << res.invariant_checked
         << " brute-force class checks";
    res.report.push_back(tail.str());
    return res;
}

}  // namespace loci
