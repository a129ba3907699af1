#pragma once

// Causal-statement store and closure engine.
//
// A statement is either an established fact "X => Y" / "X => S" (X is an
// ancestor of Y, or of some selection node), a negative atom "X =/=> Y" /
// "X =/=> S", or an open disjunction "X => {Y,W} + S" over at most two node
// targets plus an optional selection term. Minimal independencies and their
// destroyers inject statements; close() saturates the store under the causal
// reduction rules:
//
//   reduce      drop a disjunct term refuted by an established negative
//   irreflexive X => X is false
//   acyclic     X => Y refutes Y => X
//   transitive  X => Y, Y => Z  |-  X => Z   (and the S variant), plus the
//               contrapositives X => Y, X =/=> C |- Y =/=> C and
//               X => Y, C =/=> Y |- C =/=> X
//   substitute  expand a target of one disjunction with a statement about
//               that target, keeping results that fit the canonical form
//
// Every statement carries a derivation trace; a derived contradiction throws
// InconsistencyError naming the traces of both sides, which makes bad replay
// input diagnosable. The saturation is deterministic and order-independent
// in its final fact set (the test suite checks confluence by permutation).

#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loci/core.hpp"

namespace loci {

enum class Status { Established, Refuted, Unknown };

// Target of a causal atom: a node index, or kSelectionTarget for "=> S".
constexpr NodeId kSelectionTarget = -1;

struct CausalAtom {
    NodeId source = -1;
    NodeId target = kSelectionTarget;
    bool selection() const { return target == kSelectionTarget; }
};

enum class StepKind {
    MinimalIndependence,
    DestroyerDependence,
    InferredBlocking,
    Substitute,
    ReduceNegative,
    ReduceIrreflexive,
    ReduceAcyclic,
    ReduceTransitive,
};

inline const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::MinimalIndependence: return "minimal-independence";
        case StepKind::DestroyerDependence: return "destroyer-dependence";
        case StepKind::InferredBlocking: return "inferred-blocking";
        case StepKind::Substitute: return "substitute";
        case StepKind::ReduceNegative: return "reduce-negative";
        case StepKind::ReduceIrreflexive: return "reduce-irreflexive";
        case StepKind::ReduceAcyclic: return "reduce-acyclic";
        default: return "reduce-transitive";
    }
}

struct TraceStep {
    StepKind kind;
    std::vector<int> inputs;  // trace ids of premise statements
    int fact_id = -1;         // index into the run's CiFact record, for leaves
    std::string output;       // rendered statement this step produced
    std::string note;         // extra context (destroyer node, sequence, ...)
};

struct Disjunct {
    NodeId subject = -1;
    NodeSet targets;
    bool selection = false;
    int trace = -1;
    bool live = true;
};

class StatementList {
public:
    explicit StatementList(std::vector<std::string> labels, bool keep_wide = false)
        : labels_(std::move(labels)), keep_wide_(keep_wide) {
        const size_t n = labels_.size();
        if (static_cast<int>(n) > NodeSet::max_size()) throw std::invalid_argument("too many variables");
        pos_.assign(n, NodeSet());
        pos_into_.assign(n, NodeSet());
        neg_.assign(n, NodeSet());
        neg_into_.assign(n, NodeSet());
        pos_trace_.assign(n * n, -1);
        neg_trace_.assign(n * n, -1);
        pos_sel_trace_.assign(n, -1);
        neg_sel_trace_.assign(n, -1);
    }

    int variable_count() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    // --- rendering ---

    std::string atom_text(NodeId source, NodeId target) const {
        std::string out = labels_[static_cast<size_t>(source)] + " => ";
        out += target == kSelectionTarget ? "S" : labels_[static_cast<size_t>(target)];
        return out;
    }

    std::string disjunct_text(NodeId subject, NodeSet targets, bool selection) const {
        std::string out = labels_[static_cast<size_t>(subject)] + " => {";
        bool first = true;
        for (NodeId t : targets) {
            if (!first) out += ',';
            first = false;
            out += labels_[static_cast<size_t>(t)];
        }
        out += '}';
        if (selection) out += " + S";
        return out;
    }

    // --- ingestion (Lemma 3 and Lemma 4 entry points) ---

    // Minimal independence x _||_ y | [z]: every member of z is an ancestor
    // of x, of y, or of selection. A separation by the empty set additionally
    // rules out ancestry between the pair (sound when no directed path
    // between them can pass through a selection node; see random_dag docs).
    void assert_minimal_independence(NodeId x, NodeId y, NodeSet z, int fact_id) {
        if (z.empty()) {
            int t1 = push_step({StepKind::MinimalIndependence, {}, fact_id, atom_text(x, y) + " refuted", ""});
            add_neg(x, y, t1);
            int t2 = push_step({StepKind::MinimalIndependence, {}, fact_id, atom_text(y, x) + " refuted", ""});
            add_neg(y, x, t2);
            return;
        }
        for (NodeId zi : z) {
            int t = push_step({StepKind::MinimalIndependence, {}, fact_id,
                               disjunct_text(zi, NodeSet::of({x, y}), true), ""});
            add_positive(zi, NodeSet::of({x, y}), true, t);
        }
    }

    // w destroys the independence x _||_ y | z: w is an ancestor of none of
    // x, y, the members of z, or selection.
    void assert_destroyer(NodeId x, NodeId y, NodeSet z, NodeId w, int fact_id) {
        const std::string note = "destroyer " + labels_[static_cast<size_t>(w)];
        for (NodeId t : z.with(x).with(y)) {
            int id = push_step({StepKind::DestroyerDependence, {}, fact_id, atom_text(w, t) + " refuted", note});
            add_neg(w, t, id);
        }
        int id = push_step({StepKind::DestroyerDependence, {}, fact_id, atom_text(w, kSelectionTarget) + " refuted", note});
        add_neg_sel(w, id);
    }

    // Inferred blocking node z in a sequence [x, z_1..z_k, z, y]:
    // z => z_k or z => y or z => S. `support` are the trace ids of the
    // refuted atoms that establish the sequence's non-ancestor conditions.
    void assert_blocking_premise(NodeId z, NodeId zk, NodeId y, int fact_id, std::vector<int> support,
                                 const std::string& sequence) {
        int t = push_step({StepKind::InferredBlocking, std::move(support), fact_id,
                           disjunct_text(z, NodeSet::of({zk, y}), true), "sequence " + sequence});
        add_positive(z, NodeSet::of({zk, y}), true, t);
    }

    // --- closure ---

    // Saturates the store; safe to call repeatedly and after further asserts.
    void close() {
        process_atom_events();
        while (dirty_) {
            dirty_ = false;
            reduce_pass();
            substitute_pass();
        }
        closed_ = true;
    }

    bool closed() const { return closed_; }

    // --- queries ---

    Status query(NodeId source, NodeId target) const {
        if (target == kSelectionTarget) {
            if (pos_sel_.contains(source)) return Status::Established;
            if (neg_sel_.contains(source)) return Status::Refuted;
            return Status::Unknown;
        }
        if (pos_[static_cast<size_t>(source)].contains(target)) return Status::Established;
        if (neg_[static_cast<size_t>(source)].contains(target)) return Status::Refuted;
        return Status::Unknown;
    }

    NodeSet established_targets(NodeId x) const { return pos_[static_cast<size_t>(x)]; }
    NodeSet refuted_targets(NodeId x) const { return neg_[static_cast<size_t>(x)]; }
    NodeSet established_selection() const { return pos_sel_; }
    NodeSet refuted_selection() const { return neg_sel_; }

    const std::vector<Disjunct>& disjuncts() const { return disjuncts_; }

    bool has_live_disjunct(NodeId subject, NodeSet targets, bool selection) const {
        for (const auto& d : disjuncts_)
            if (d.live && d.subject == subject && d.targets == targets && d.selection == selection) return true;
        return false;
    }

    int atom_trace(NodeId source, NodeId target) const {
        Status s = query(source, target);
        if (s == Status::Unknown) return -1;
        const size_t n = labels_.size();
        if (target == kSelectionTarget)
            return s == Status::Established ? pos_sel_trace_[static_cast<size_t>(source)]
                                            : neg_sel_trace_[static_cast<size_t>(source)];
        size_t at = static_cast<size_t>(source) * n + static_cast<size_t>(target);
        return s == Status::Established ? pos_trace_[at] : neg_trace_[at];
    }

    const TraceStep& step(int id) const { return steps_.at(static_cast<size_t>(id)); }
    int step_count() const { return static_cast<int>(steps_.size()); }

    // Canonical content fingerprint: atoms plus live disjunct keys. Two lists
    // with equal fingerprints carry the same information.
    std::string fingerprint() const {
        std::ostringstream out;
        for (size_t x = 0; x < labels_.size(); ++x) {
            out << pos_[x].bits() << '/' << neg_[x].bits() << ';';
        }
        out << pos_sel_.bits() << '|' << neg_sel_.bits() << '|';
        std::set<std::string> keys;
        for (const auto& d : disjuncts_)
            if (d.live)
                keys.insert(std::to_string(d.subject) + ":" + std::to_string(d.targets.bits()) +
                            (d.selection ? "+S" : ""));
        for (const auto& k : keys) out << k << ';';
        return out.str();
    }

    // One statement per line: facts, then negatives, then open disjunctions.
    std::string statement_log() const {
        std::ostringstream out;
        for (size_t x = 0; x < labels_.size(); ++x)
            for (NodeId y : pos_[x]) out << "fact " << atom_text(static_cast<NodeId>(x), y) << '\n';
        for (NodeId x : pos_sel_) out << "fact " << atom_text(x, kSelectionTarget) << '\n';
        for (size_t x = 0; x < labels_.size(); ++x)
            for (NodeId y : neg_[x]) out << "neg " << atom_text(static_cast<NodeId>(x), y) << '\n';
        for (NodeId x : neg_sel_) out << "neg " << atom_text(x, kSelectionTarget) << '\n';
        for (const auto& d : disjuncts_)
            if (d.live) out << "disj " << disjunct_text(d.subject, d.targets, d.selection) << '\n';
        return out.str();
    }

    // Renders the derivation tree below a trace id, one step per line.
    std::string trace_text(int trace_id, int indent = 0) const {
        const TraceStep& s = step(trace_id);
        std::string out(static_cast<size_t>(indent) * 2, ' ');
        out += s.output + "   [" + step_kind_name(s.kind);
        if (s.fact_id >= 0) out += ", fact #" + std::to_string(s.fact_id);
        if (!s.note.empty()) out += ", " + s.note;
        out += "]\n";
        for (int in : s.inputs) out += trace_text(in, indent + 1);
        return out;
    }

private:
    // --- trace arena ---

    int push_step(TraceStep s) {
        steps_.push_back(std::move(s));
        return static_cast<int>(steps_.size()) - 1;
    }

    [[noreturn]] void contradiction(const std::string& what, int trace_a, int trace_b) {
        std::string msg = "inconsistent statements: " + what + "\n--- derivation of one side ---\n" +
                          trace_text(trace_a) + "--- derivation of the other ---\n" + trace_text(trace_b);
        throw InconsistencyError(msg);
    }

    // --- atom-level rules ---

    struct AtomEvent {
        enum Kind { PosNode, PosSel, NegNode, NegSel } kind;
        NodeId a, b;
    };

    void add_pos(NodeId x, NodeId y, int trace) {
        const size_t n = labels_.size();
        if (x == y) contradiction(atom_text(x, y) + " (irreflexivity)", trace, trace);
        size_t at = static_cast<size_t>(x) * n + static_cast<size_t>(y);
        if (pos_[static_cast<size_t>(x)].contains(y)) return;
        if (neg_[static_cast<size_t>(x)].contains(y))
            contradiction(atom_text(x, y) + " both established and refuted", trace, neg_trace_[at]);
        pos_[static_cast<size_t>(x)].insert(y);
        pos_into_[static_cast<size_t>(y)].insert(x);
        pos_trace_[at] = trace;
        retire_subsumed_by_fact(x, NodeSet::single(y), false);
        events_.push_back({AtomEvent::PosNode, x, y});
        dirty_ = true;
    }

    void add_pos_sel(NodeId x, int trace) {
        if (pos_sel_.contains(x)) return;
        if (neg_sel_.contains(x))
            contradiction(atom_text(x, kSelectionTarget) + " both established and refuted", trace,
                          neg_sel_trace_[static_cast<size_t>(x)]);
        pos_sel_.insert(x);
        pos_sel_trace_[static_cast<size_t>(x)] = trace;
        retire_subsumed_by_fact(x, NodeSet(), true);
        events_.push_back({AtomEvent::PosSel, x, -1});
        dirty_ = true;
    }

    void add_neg(NodeId x, NodeId y, int trace) {
        if (x == y) return;  // X =/=> X is vacuously true
        const size_t n = labels_.size();
        size_t at = static_cast<size_t>(x) * n + static_cast<size_t>(y);
        if (neg_[static_cast<size_t>(x)].contains(y)) return;
        if (pos_[static_cast<size_t>(x)].contains(y))
            contradiction(atom_text(x, y) + " both established and refuted", pos_trace_[at], trace);
        neg_[static_cast<size_t>(x)].insert(y);
        neg_into_[static_cast<size_t>(y)].insert(x);
        neg_trace_[at] = trace;
        events_.push_back({AtomEvent::NegNode, x, y});
        dirty_ = true;
    }

    void add_neg_sel(NodeId x, int trace) {
        if (neg_sel_.contains(x)) return;
        if (pos_sel_.contains(x))
            contradiction(atom_text(x, kSelectionTarget) + " both established and refuted",
                          pos_sel_trace_[static_cast<size_t>(x)], trace);
        neg_sel_.insert(x);
        neg_sel_trace_[static_cast<size_t>(x)] = trace;
        events_.push_back({AtomEvent::NegSel, x, -1});
        dirty_ = true;
    }

    int pos_trace(NodeId x, NodeId y) const { return pos_trace_[static_cast<size_t>(x) * labels_.size() + static_cast<size_t>(y)]; }
    int neg_trace(NodeId x, NodeId y) const { return neg_trace_[static_cast<size_t>(x) * labels_.size() + static_cast<size_t>(y)]; }

    int transitive_step(const std::string& out, int in1, int in2) {
        return push_step({StepKind::ReduceTransitive, {in1, in2}, -1, out, ""});
    }

    void process_atom_events() {
        while (!events_.empty()) {
            AtomEvent e = events_.front();
            events_.pop_front();
            switch (e.kind) {
                case AtomEvent::PosNode: {
                    auto [x, y] = std::pair{e.a, e.b};
                    int t = pos_trace(x, y);
                    // acyclicity
                    add_neg(y, x, push_step({StepKind::ReduceAcyclic, {t}, -1, atom_text(y, x) + " refuted", ""}));
                    // transitivity, both directions
                    for (NodeId z : pos_[static_cast<size_t>(y)])
                        add_pos(x, z, transitive_step(atom_text(x, z), t, pos_trace(y, z)));
                    for (NodeId w : pos_into_[static_cast<size_t>(x)])
                        add_pos(w, y, transitive_step(atom_text(w, y), pos_trace(w, x), t));
                    if (pos_sel_.contains(y))
                        add_pos_sel(x, transitive_step(atom_text(x, kSelectionTarget), t,
                                                       pos_sel_trace_[static_cast<size_t>(y)]));
                    // contrapositives
                    for (NodeId c : neg_[static_cast<size_t>(x)])
                        add_neg(y, c, transitive_step(atom_text(y, c) + " refuted", t, neg_trace(x, c)));
                    if (neg_sel_.contains(x))
                        add_neg_sel(y, transitive_step(atom_text(y, kSelectionTarget) + " refuted", t,
                                                       neg_sel_trace_[static_cast<size_t>(x)]));
                    for (NodeId c : neg_into_[static_cast<size_t>(y)])
                        add_neg(c, x, transitive_step(atom_text(c, x) + " refuted", t, neg_trace(c, y)));
                    break;
                }
                case AtomEvent::PosSel: {
                    NodeId x = e.a;
                    int t = pos_sel_trace_[static_cast<size_t>(x)];
                    for (NodeId w : pos_into_[static_cast<size_t>(x)])
                        add_pos_sel(w, transitive_step(atom_text(w, kSelectionTarget), pos_trace(w, x), t));
                    for (NodeId c : neg_sel_)
                        add_neg(c, x, transitive_step(atom_text(c, x) + " refuted", t,
                                                      neg_sel_trace_[static_cast<size_t>(c)]));
                    break;
                }
                case AtomEvent::NegNode: {
                    auto [a, c] = std::pair{e.a, e.b};
                    int t = neg_trace(a, c);
                    for (NodeId b : pos_[static_cast<size_t>(a)])
                        add_neg(b, c, transitive_step(atom_text(b, c) + " refuted", pos_trace(a, b), t));
                    for (NodeId s : pos_into_[static_cast<size_t>(c)])
                        add_neg(a, s, transitive_step(atom_text(a, s) + " refuted", pos_trace(s, c), t));
                    break;
                }
                case AtomEvent::NegSel: {
                    NodeId x = e.a;
                    int t = neg_sel_trace_[static_cast<size_t>(x)];
                    for (NodeId b : pos_[static_cast<size_t>(x)])
                        add_neg_sel(b, transitive_step(atom_text(b, kSelectionTarget) + " refuted",
                                                       pos_trace(x, b), t));
                    for (NodeId a : pos_sel_)
                        add_neg(x, a, transitive_step(atom_text(x, a) + " refuted",
                                                      pos_sel_trace_[static_cast<size_t>(a)], t));
                    break;
                }
            }
        }
    }

    // --- disjunction handling ---

    void retire_subsumed_by_fact(NodeId subject, NodeSet targets, bool selection) {
        for (auto& d : disjuncts_)
            if (d.live && d.subject == subject && targets.subset_of(d.targets) && (!selection || d.selection))
                d.live = false;
    }

    // Canonicalizes and stores a positive statement (disjunction of
    // subject => t terms, plus subject => S when selection is set).
    void add_positive(NodeId subject, NodeSet targets, bool selection, int trace) {
        // irreflexivity
        if (targets.contains(subject)) {
            targets = targets.without(subject);
            trace = push_step({StepKind::ReduceIrreflexive, {trace}, -1,
                               disjunct_text(subject, targets, selection), ""});
        }
        // reduce against established negatives
        for (NodeId t : targets.intersect(neg_[static_cast<size_t>(subject)])) {
            targets = targets.without(t);
            trace = push_step({StepKind::ReduceNegative, {trace, neg_trace(subject, t)}, -1,
                               disjunct_text(subject, targets, selection), ""});
        }
        if (selection && neg_sel_.contains(subject)) {
            selection = false;
            trace = push_step({StepKind::ReduceNegative, {trace, neg_sel_trace_[static_cast<size_t>(subject)]}, -1,
                               disjunct_text(subject, targets, selection), ""});
        }

        const int terms = targets.size() + (selection ? 1 : 0);
        if (terms == 0) {
            const TraceStep& s = step(trace);
            int other = s.inputs.size() > 1 ? s.inputs[1] : trace;
            contradiction("all terms of a disjunction refuted (subject " + labels_[static_cast<size_t>(subject)] + ")",
                          trace, other);
        }
        if (terms == 1) {
            if (selection)
                add_pos_sel(subject, trace);
            else
                add_pos(subject, targets.first(), trace);
            return;
        }
        if (targets.size() > 2 && !keep_wide_) return;

        // established facts or equal/stronger disjunctions make this redundant
        if (pos_[static_cast<size_t>(subject)].intersects(targets)) return;
        if (selection && pos_sel_.contains(subject)) return;
        std::string key = std::to_string(subject) + ":" + std::to_string(targets.bits()) + (selection ? "+S" : "");
        if (!ever_added_.insert(key).second) return;
        for (const auto& d : disjuncts_)
            if (d.live && d.subject == subject && d.targets.subset_of(targets) && (!d.selection || selection))
                return;
        // retire anything this one strengthens
        for (auto& d : disjuncts_)
            if (d.live && d.subject == subject && targets.subset_of(d.targets) && (!selection || d.selection))
                d.live = false;
        disjuncts_.push_back({subject, targets, selection, trace, true});
        dirty_ = true;
    }

    void reduce_pass() {
        for (size_t i = 0; i < disjuncts_.size(); ++i) {
            Disjunct d = disjuncts_[i];
            if (!d.live) continue;
            bool droppable = d.targets.intersects(neg_[static_cast<size_t>(d.subject)]) ||
                             (d.selection && neg_sel_.contains(d.subject));
            if (!droppable) continue;
            disjuncts_[i].live = false;
            add_positive(d.subject, d.targets, d.selection, d.trace);
            process_atom_events();
        }
    }

    void substitute_pass() {
        for (size_t i = 0; i < disjuncts_.size(); ++i) {
            if (!disjuncts_[i].live) continue;
            const Disjunct d1 = disjuncts_[i];
            for (NodeId b : d1.targets) {
                if (!disjuncts_[i].live) break;
                // established facts about b
                for (NodeId y : pos_[static_cast<size_t>(b)])
                    apply_substitution(d1, b, NodeSet::single(y), false, pos_trace(b, y));
                if (!disjuncts_[i].live) break;
                if (pos_sel_.contains(b))
                    apply_substitution(d1, b, NodeSet(), true, pos_sel_trace_[static_cast<size_t>(b)]);
                if (!disjuncts_[i].live) break;
                // open disjunctions about b (snapshot: later additions get
                // their turn in the next outer iteration)
                const size_t limit = disjuncts_.size();
                for (size_t j = 0; j < limit; ++j) {
                    if (i == j || !disjuncts_[j].live || disjuncts_[j].subject != b) continue;
                    const Disjunct d2 = disjuncts_[j];
                    apply_substitution(d1, b, d2.targets, d2.selection, d2.trace);
                    if (!disjuncts_[i].live) break;
                }
            }
        }
        // An established fact is a one-term statement, so it can be expanded
        // the same way: x => b with b => {..}(+S) gives x => {..}(+S).
        const size_t limit = disjuncts_.size();
        for (size_t x = 0; x < labels_.size(); ++x) {
            for (NodeId b : pos_[x]) {
                for (size_t j = 0; j < limit; ++j) {
                    if (!disjuncts_[j].live || disjuncts_[j].subject != b) continue;
                    const Disjunct d2 = disjuncts_[j];
                    int t = push_step({StepKind::Substitute,
                                       {pos_trace(static_cast<NodeId>(x), b), d2.trace},
                                       -1,
                                       disjunct_text(static_cast<NodeId>(x), d2.targets, d2.selection),
                                       "substituted " + labels_[static_cast<size_t>(b)]});
                    add_positive(static_cast<NodeId>(x), d2.targets, d2.selection, t);
                    process_atom_events();
                }
            }
        }
    }

    void apply_substitution(const Disjunct& d1, NodeId b, NodeSet src_targets, bool src_selection, int src_trace) {
        NodeSet merged = d1.targets.without(b).unite(src_targets);
        bool selection = d1.selection || src_selection;
        int t = push_step({StepKind::Substitute, {d1.trace, src_trace}, -1,
                           disjunct_text(d1.subject, merged, selection),
                           "substituted " + labels_[static_cast<size_t>(b)]});
        add_positive(d1.subject, merged, selection, t);
        process_atom_events();
    }

    std::vector<std::string> labels_;
    bool keep_wide_;
    bool closed_ = false;
    bool dirty_ = false;

    std::vector<NodeSet> pos_, pos_into_, neg_, neg_into_;
    NodeSet pos_sel_, neg_sel_;
    std::vector<int> pos_trace_, neg_trace_, pos_sel_trace_, neg_sel_trace_;

    std::vector<Disjunct> disjuncts_;
    std::set<std::string> ever_added_;
    std::deque<AtomEvent> events_;
    std::vector<TraceStep> steps_;
};

}  // namespace loci
