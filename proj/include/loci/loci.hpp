#pragma once

// The LoCI driver. One minimal conditional independence is searched per
// variable pair and converted into causal statements, together with the
// variables that destroy it; the statement list is closed under the causal
// logic rules; inferred blocking nodes add the remaining premises; finally
// the statements are transferred onto the never-separated skeleton as edge
// marks. Runs either against a live independence oracle or as a replay of a
// recorded fact stream, and can stop early after any number of pair
// determinations with everything derived so far still valid.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loci/core.hpp"
#include "loci/graph.hpp"
#include "loci/oracle.hpp"
#include "loci/statements.hpp"

namespace loci {

struct LociConfig {
    int max_cond = -1;                    // cap on conditioning set size, -1 = all sizes
    std::optional<int> anytime_budget;    // stop after this many pair determinations
    bool keep_wide_disjunctions = false;  // keep disjunctions with more than two node targets
    bool batch_closure = false;           // close once after the whole search instead of per pair
    bool strict_blocking = false;         // re-check blocking-node dependence evidence one by one
};

enum class PairStatus { Separated, NonSeparated, Unknown };

struct LociResult {
    MixedGraph pag;
    MixedGraph pag_before_blocking;  // marks known before the blocking-node pass
    StatementList statements;
    std::vector<CiFact> facts;            // trace fact ids index into this
    std::vector<PairStatus> pair_status;  // n*n, symmetric
    std::vector<int> pair_fact;           // fact id that settled the pair, -1 if none
    std::vector<std::string> blocking_log;
    std::vector<std::string> strict_notes;
};

// One accepted application of the inferred-blocking-node rule.
struct BlockingPremise {
    NodeId z = -1, zk = -1, y = -1;  // conclusion: z => zk, or z => y, or z => S
    int fact_id = -1;                // the framing minimal independence
    std::vector<int> support;        // traces of the refuted neighbor relations
    std::vector<NodeId> sequence;    // [x, z_1..z_k, z, y]
    std::vector<int> nosep_facts;    // facts recording the never-separated pairs
};

// Edge mark carried by the statement list for the x side of edge x-y: a tail
// needs x => y or x => S (possibly still disjoined with each other), an
// arrowhead needs both refuted.
inline Mark statement_mark(const StatementList& s, NodeId x, NodeId y) {
    const bool tail = s.query(x, y) == Status::Established ||
                      s.query(x, kSelectionTarget) == Status::Established ||
                      s.has_live_disjunct(x, NodeSet::single(y), true);
    const bool arrow =
        s.query(x, y) == Status::Refuted && s.query(x, kSelectionTarget) == Status::Refuted;
    if (tail && arrow) throw std::logic_error("contradictory mark evidence survived closure");
    return tail ? Mark::Tail : arrow ? Mark::Arrow : Mark::Circle;
}

// Pairs never shown separated stay adjacent; pairs never examined stay
// adjacent too, carrying circles until evidence arrives.
inline MixedGraph reconstruct_pag(const StatementList& stmts, const std::vector<PairStatus>& status) {
    const int n = stmts.variable_count();
    MixedGraph g(stmts.labels());
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y) {
            if (status[static_cast<size_t>(x) * static_cast<size_t>(n) + static_cast<size_t>(y)] ==
                PairStatus::Separated)
                continue;
            g.add_edge(x, y, statement_mark(stmts, x, y), statement_mark(stmts, y, x));
        }
    return g;
}

namespace detail {
constexpr long long kBlockingVisitCap = 1LL << 26;
}

// Enumerates sequences [x, z_1..z_k, z, y] (k >= 1) inside a recorded minimal
// independence x _||_ y | Z with {z_1..z_k, z} drawn from Z, such that every
// consecutive pair was never separated and no interior z_i can cause either
// of its sequence neighbors. Each new conclusion z => zk or z => y or z => S
// is returned once; `emitted` carries the dedup state across calls.
inline std::vector<BlockingPremise> find_inferred_blocking_nodes(
    const StatementList& stmts, const std::vector<PairStatus>& status, const std::vector<CiFact>& facts,
    const std::vector<int>& pair_fact, std::set<std::string>& emitted,
    long long visit_cap = detail::kBlockingVisitCap) {
    const size_t n = static_cast<size_t>(stmts.variable_count());
    auto nonsep = [&](NodeId a, NodeId b) {
        return status[static_cast<size_t>(a) * n + static_cast<size_t>(b)] == PairStatus::NonSeparated;
    };
    auto refuted = [&](NodeId s, NodeId t) { return stmts.query(s, t) == Status::Refuted; };

    std::vector<BlockingPremise> out;
    long long visits = 0;

    for (size_t fid = 0; fid < facts.size(); ++fid) {
        const CiFact& f = facts[fid];
        if (!f.independent || !f.minimal || f.query.z.size() < 2) continue;
        const NodeSet zset = f.query.z;
        for (auto [a, b] : {std::pair{f.query.x, f.query.y}, std::pair{f.query.y, f.query.x}}) {
            for (NodeId z : zset) {
                std::vector<NodeId> tuple;
                NodeSet used;
                auto dfs = [&](auto&& self, NodeId last) -> void {
                    if (++visits > visit_cap)
                        throw ResourceLimitError("blocking-node sequence search exceeded its visit cap");
                    if (!tuple.empty() && nonsep(last, z) && nonsep(z, b) && refuted(last, z)) {
                        NodeId zk = last;
                        std::string key = std::to_string(z) + ":" +
                                          std::to_string(NodeSet::of({zk, b}).bits()) + "+S";
                        if (emitted.insert(key).second) {
                            BlockingPremise p;
                            p.z = z;
                            p.zk = zk;
                            p.y = b;
                            p.fact_id = static_cast<int>(fid);
                            p.sequence.push_back(a);
                            p.sequence.insert(p.sequence.end(), tuple.begin(), tuple.end());
                            p.sequence.push_back(z);
                            p.sequence.push_back(b);
                            for (size_t i = 1; i + 2 < p.sequence.size(); ++i) {
                                p.support.push_back(stmts.atom_trace(p.sequence[i], p.sequence[i - 1]));
                                p.support.push_back(stmts.atom_trace(p.sequence[i], p.sequence[i + 1]));
                            }
                            for (size_t j = 0; j + 1 < p.sequence.size(); ++j) {
                                int id = pair_fact[static_cast<size_t>(p.sequence[j]) * n +
                                                   static_cast<size_t>(p.sequence[j + 1])];
                                if (id >= 0) p.nosep_facts.push_back(id);
                            }
                            out.push_back(std::move(p));
                        }
                    }
                    for (NodeId c : zset.without(z).minus(used)) {
                        if (!nonsep(last, c)) continue;
                        if (!refuted(c, last)) continue;
                        if (!tuple.empty() && !refuted(last, c)) continue;
                        used.insert(c);
                        tuple.push_back(c);
                        self(self, c);
                        tuple.pop_back();
                        used.erase(c);
                    }
                };
                dfs(dfs, a);
            }
        }
    }
    return out;
}

// Replays a recorded fact stream. `oracle` is only consulted in strict
// blocking mode to double-check dependence evidence; pass nullptr otherwise.
inline LociResult run_loci_on_facts(const std::vector<std::string>& labels, const std::vector<CiFact>& stream,
                                    const LociConfig& cfg = {}, const IndependenceOracle* oracle = nullptr) {
    const size_t n = labels.size();
    StatementList stmts(labels, cfg.keep_wide_disjunctions);
    std::vector<PairStatus> status(n * n, PairStatus::Unknown);
    std::vector<int> pair_fact(n * n, -1);
    std::vector<CiFact> facts;
    facts.reserve(stream.size());

    int determinations = 0;
    for (const CiFact& f : stream) {
        if (cfg.anytime_budget && determinations >= *cfg.anytime_budget) break;
        const int id = static_cast<int>(facts.size());
        facts.push_back(f);
        const size_t ij = static_cast<size_t>(f.query.x) * n + static_cast<size_t>(f.query.y);
        const size_t ji = static_cast<size_t>(f.query.y) * n + static_cast<size_t>(f.query.x);
        auto set_status = [&](PairStatus st) {
            if (status[ij] != PairStatus::Unknown && status[ij] != st)
                throw InconsistencyError("facts disagree on whether " + labels[static_cast<size_t>(f.query.x)] +
                                         " and " + labels[static_cast<size_t>(f.query.y)] + " are separable");
            status[ij] = status[ji] = st;
            if (pair_fact[ij] < 0) pair_fact[ij] = pair_fact[ji] = id;
        };
        if (f.independent) {
            set_status(PairStatus::Separated);
            if (f.minimal) stmts.assert_minimal_independence(f.query.x, f.query.y, f.query.z, id);
            for (NodeId w : f.destroyers) stmts.assert_destroyer(f.query.x, f.query.y, f.query.z, w, id);
            ++determinations;
        } else if (f.exhaustive) {
            set_status(PairStatus::NonSeparated);
            ++determinations;
        }
        // subset-specific dependence lines are bookkeeping only
        if (!cfg.batch_closure) stmts.close();
    }
    stmts.close();

    MixedGraph pag_before = reconstruct_pag(stmts, status);

    std::vector<std::string> blocking_log, strict_notes;
    std::set<std::string> emitted;
    if (cfg.strict_blocking && !oracle)
        strict_notes.push_back("strict blocking verification skipped: no oracle attached");
    for (;;) {
        auto premises = find_inferred_blocking_nodes(stmts, status, facts, pair_fact, emitted);
        if (premises.empty()) break;
        for (const auto& p : premises) {
            std::string seq;
            for (NodeId u : p.sequence) {
                if (!seq.empty()) seq += ',';
                seq += labels[static_cast<size_t>(u)];
            }
            std::string note = seq + "; never-separated pairs from facts";
            for (int id : p.nosep_facts) note += " #" + std::to_string(id);
            stmts.assert_blocking_premise(p.z, p.zk, p.y, p.fact_id, p.support, note);
            blocking_log.push_back("blocking node " + labels[static_cast<size_t>(p.z)] + " in " + seq + ": " +
                                   stmts.disjunct_text(p.z, NodeSet::of({p.zk, p.y}), true));
            if (cfg.strict_blocking && oracle) {
                const CiFact& frame = facts[static_cast<size_t>(p.fact_id)];
                for (size_t j = 0; j + 1 < p.sequence.size(); ++j) {
                    NodeId u = p.sequence[j], v = p.sequence[j + 1];
                    NodeSet rest = frame.query.z.without(u).without(v);
                    for_each_subset_by_size(rest, rest.size(), [&](NodeSet zp) {
                        if (!oracle->independent(u, v, zp)) return false;
                        strict_notes.push_back("strict: sequence " + seq + " pair " +
                                               labels[static_cast<size_t>(u)] + "," +
                                               labels[static_cast<size_t>(v)] +
                                               " is separable within the recorded conditioning set");
                        return true;
                    });
                }
            }
        }
        stmts.close();
    }

    MixedGraph pag = reconstruct_pag(stmts, status);
    return LociResult{std::move(pag),       std::move(pag_before), std::move(stmts),
                      std::move(facts),     std::move(status),     std::move(pair_fact),
                      std::move(blocking_log), std::move(strict_notes)};
}

// Full run against an oracle: per-pair minimal-independence search feeding
// the replay path above.
inline LociResult run_loci(const IndependenceOracle& oracle, const LociConfig& cfg = {}) {
    const int n = oracle.variable_count();
    std::vector<CiFact> stream;
    int determinations = 0;
    bool exhausted = false;
    for (NodeId x = 0; x < n && !exhausted; ++x)
        for (NodeId y = x + 1; y < n; ++y) {
            if (cfg.anytime_budget && determinations >= *cfg.anytime_budget) {
                exhausted = true;
                break;
            }
            if (auto mi = find_minimal_independence(oracle, x, y, cfg.max_cond)) {
                mi->destroyers = find_destroyers(oracle, *mi);
                stream.push_back(*mi);
            } else {
                CiFact dep;
                dep.query = CiQuery(x, y, NodeSet());
                dep.exhaustive = true;
                stream.push_back(dep);
            }
            ++determinations;
        }
    return run_loci_on_facts(oracle.labels(), stream, cfg, &oracle);
}

// Derivation tree for one causal relation, or nullopt if it was never
// settled. Target kSelectionTarget asks about "source => S".
inline std::optional<std::string> derivation_of(const LociResult& r, NodeId source, NodeId target) {
    int t = r.statements.atom_trace(source, target);
    if (t < 0) return std::nullopt;
    return r.statements.trace_text(t);
}

}  // namespace loci
