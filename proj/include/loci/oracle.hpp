#pragma once

// Conditional-independence oracles. DagOracle answers queries against a
// ground-truth DAG by d-separation, always conditioning on the selection
// nodes; observed variables are re-indexed densely so latent and selection
// nodes cannot be named in a query at all. CachingOracle memoizes answers
// (get-or-compute under a lock) and counts traffic.
//
// CiFact is one recorded search outcome. The text log format, one fact per
// line, doubles as replay input:
//
//   indep X Y | Z1,Z2 minimal destroyers=W1,W2
//   nosep X Y                  (the full search found no separating set)
//   dep X Y | Z1,Z2            (dependence under one specific set)

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loci/separation.hpp"

namespace loci {

struct CiQuery {
    NodeId x = -1, y = -1;  // kept with x < y; queries are symmetric
    NodeSet z;

    CiQuery() = default;
    CiQuery(NodeId a, NodeId b, NodeSet cond) : x(a < b ? a : b), y(a < b ? b : a), z(cond) {}

    bool operator==(const CiQuery&) const = default;
    auto operator<=>(const CiQuery& o) const {
        if (auto c = x <=> o.x; c != 0) return c;
        if (auto c = y <=> o.y; c != 0) return c;
        return z.bits() <=> o.z.bits();
    }
};

struct CiFact {
    CiQuery query;
    bool independent = false;
    bool minimal = false;     // no strict subset of z separates
    NodeSet destroyers;       // meaningful for minimal independencies
    bool exhaustive = false;  // dependence that survived the whole search: never separated
};

class IndependenceOracle {
public:
    virtual ~IndependenceOracle() = default;
    virtual int variable_count() const = 0;
    virtual const std::vector<std::string>& labels() const = 0;
    virtual bool independent(NodeId x, NodeId y, NodeSet z) const = 0;
};

class DagOracle : public IndependenceOracle {
public:
    explicit DagOracle(CausalDag dag) : dag_(std::move(dag)), selection_(dag_.selection()) {
        for (NodeId v : dag_.observed()) {
            observed_.push_back(v);
            labels_.push_back(dag_.label(v));
        }
    }

    int variable_count() const override { return static_cast<int>(observed_.size()); }
    const std::vector<std::string>& labels() const override { return labels_; }

    bool independent(NodeId x, NodeId y, NodeSet z) const override {
        NodeSet dag_z = selection_;
        for (NodeId v : z) dag_z.insert(dag_node(v));
        return d_separated(dag_, dag_node(x), dag_node(y), dag_z);
    }

    const CausalDag& dag() const { return dag_; }
    NodeId dag_node(NodeId variable) const {
        if (variable < 0 || variable >= variable_count())
            throw std::invalid_argument("query names a non-observed variable index: " + std::to_string(variable));
        return observed_[static_cast<size_t>(variable)];
    }

private:
    CausalDag dag_;
    NodeSet selection_;
    std::vector<NodeId> observed_;
    std::vector<std::string> labels_;
};

class CachingOracle : public IndependenceOracle {
public:
    explicit CachingOracle(const IndependenceOracle& inner) : inner_(inner) {}

    int variable_count() const override { return inner_.variable_count(); }
    const std::vector<std::string>& labels() const override { return inner_.labels(); }

    bool independent(NodeId x, NodeId y, NodeSet z) const override {
        CiQuery q(x, y, z);
        std::lock_guard lock(mu_);
        ++total_queries_;
        auto [it, inserted] = cache_.try_emplace(q, false);
        if (inserted) {
            ++inner_queries_;
            it->second = inner_.independent(q.x, q.y, q.z);
        }
        return it->second;
    }

    long total_queries() const { std::lock_guard lock(mu_); return total_queries_; }
    long inner_queries() const { std::lock_guard lock(mu_); return inner_queries_; }

private:
    const IndependenceOracle& inner_;
    mutable std::mutex mu_;
    mutable std::map<CiQuery, bool> cache_;
    mutable long total_queries_ = 0;
    mutable long inner_queries_ = 0;
};

// First separating set found scanning sizes 0,1,2,... (lexicographic within
// a size) over all other observed variables. Minimum cardinality implies no
// strict subset separates either, so the fact is marked minimal.
inline std::optional<CiFact> find_minimal_independence(const IndependenceOracle& oracle, NodeId x, NodeId y,
                                                       int max_cond = -1) {
    const int m = oracle.variable_count();
    if (x < 0 || x >= m || y < 0 || y >= m || x == y) throw std::invalid_argument("bad variable pair");
    if (max_cond < 0) max_cond = m - 2;
    NodeSet pool = NodeSet::full(m).without(x).without(y);
    std::optional<CiFact> found;
    for_each_subset_by_size(pool, std::min(max_cond, pool.size()), [&](NodeSet z) {
        if (!oracle.independent(x, y, z)) return false;
        found = CiFact{CiQuery(x, y, z), true, true, NodeSet()};
        return true;
    });
    return found;
}

// Variables whose addition to the separating set breaks the independence.
inline NodeSet find_destroyers(const IndependenceOracle& oracle, const CiFact& fact) {
    if (!fact.independent) throw std::invalid_argument("destroyers are defined for independence facts");
    NodeSet pool = NodeSet::full(oracle.variable_count()).without(fact.query.x).without(fact.query.y).minus(fact.query.z);
    NodeSet destroyers;
    for (NodeId w : pool)
        if (!oracle.independent(fact.query.x, fact.query.y, fact.query.z.with(w))) destroyers.insert(w);
    return destroyers;
}

namespace detail {
inline std::string join_labels(NodeSet s, const std::vector<std::string>& labels) {
    std::string out;
    for (NodeId v : s) {
        if (!out.empty()) out += ',';
        out += labels[static_cast<size_t>(v)];
    }
    return out;
}

inline NodeId label_index(const std::string& label, const std::vector<std::string>& labels, int line) {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<NodeId>(i);
    throw ParseError("unknown variable '" + label + "'", line);
}

inline NodeSet parse_label_list(const std::string& csv, const std::vector<std::string>& labels, int line) {
    NodeSet s;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
        if (!item.empty()) s.insert(label_index(item, labels, line));
    return s;
}
}  // namespace detail

inline std::string format_ci_fact(const CiFact& f, const std::vector<std::string>& labels) {
    std::ostringstream out;
    if (!f.independent && f.exhaustive) {
        out << "nosep " << labels[static_cast<size_t>(f.query.x)] << ' ' << labels[static_cast<size_t>(f.query.y)];
        return out.str();
    }
    out << (f.independent ? "indep " : "dep ") << labels[static_cast<size_t>(f.query.x)] << ' '
        << labels[static_cast<size_t>(f.query.y)] << " | " << detail::join_labels(f.query.z, labels);
    if (f.independent) {
        if (f.minimal) out << " minimal";
        out << " destroyers=" << detail::join_labels(f.destroyers, labels);
    }
    return out.str();
}

inline CiFact parse_ci_fact(const std::string& line, const std::vector<std::string>& labels, int line_no = 0) {
    auto toks = detail::split_ws(line);
    if (toks.size() == 3 && toks[0] == "nosep") {
        NodeId x = detail::label_index(toks[1], labels, line_no);
        NodeId y = detail::label_index(toks[2], labels, line_no);
        if (x == y) throw ParseError("fact relates a variable to itself", line_no);
        CiFact f;
        f.query = CiQuery(x, y, NodeSet());
        f.exhaustive = true;
        return f;
    }
    if (toks.size() < 4 || (toks[0] != "indep" && toks[0] != "dep") || toks[3] != "|")
        throw ParseError("expected 'indep|dep X Y | ...' or 'nosep X Y'", line_no);
    CiFact f;
    f.independent = toks[0] == "indep";
    NodeId x = detail::label_index(toks[1], labels, line_no);
    NodeId y = detail::label_index(toks[2], labels, line_no);
    if (x == y) throw ParseError("fact relates a variable to itself", line_no);
    size_t next = 4;
    NodeSet z;
    if (next < toks.size() && toks[next] != "minimal" && toks[next].rfind("destroyers=", 0) != 0)
        z = detail::parse_label_list(toks[next++], labels, line_no);
    f.query = CiQuery(x, y, z);
    for (; next < toks.size(); ++next) {
        if (toks[next] == "minimal" && f.independent) {
            f.minimal = true;
        } else if (toks[next].rfind("destroyers=", 0) == 0 && f.independent) {
            f.destroyers = detail::parse_label_list(toks[next].substr(11), labels, line_no);
        } else {
            throw ParseError("unexpected token '" + toks[next] + "'", line_no);
        }
    }
    if (z.contains(x) || z.contains(y)) throw ParseError("conditioning set overlaps the pair", line_no);
    if (f.destroyers.intersects(z.with(x).with(y))) throw ParseError("destroyers overlap the fact", line_no);
    return f;
}

inline std::string format_ci_facts(const std::vector<CiFact>& facts, const std::vector<std::string>& labels) {
    std::string out;
    for (const auto& f : facts) {
        out += format_ci_fact(f, labels);
        out += '\n';
    }
    return out;
}

inline std::vector<CiFact> parse_ci_facts(const std::string& text, const std::vector<std::string>& labels) {
    std::vector<CiFact> facts;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (!blank) facts.push_back(parse_ci_fact(line, labels, line_no));
    }
    return facts;
}

}  // namespace loci
