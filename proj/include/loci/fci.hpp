#pragma once

// Reference PAG construction by graphical orientation rules, used to
// cross-check the statement-based engine. Skeleton and separating sets come
// from the same per-pair minimal-independence search; afterwards the complete
// rule set R0b through R10 runs in phases:
//
//   R0b                unshielded colliders from separating sets
//   R1,R2a,R2b,R3,R4   arrowheads (R4a/R4b via discriminating paths)
//   R5                 undirected edges from uncovered circle paths
//   R6,R7              tails next to undirected edges
//   R8a,R8b,R9,R10     tails on circle-arrow edges
//
// Marks only ever strengthen (circle to tail or arrow); an attempted
// overwrite of a committed mark throws logic_error, since with an exact
// oracle that can only mean a defect in the rules themselves. Every firing
// appends one line to the rule log; firing counts per rule come back in the
// result for coverage checks. The scan order can be permuted with a seed,
// which must not change the resulting graph.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "loci/core.hpp"
#include "loci/graph.hpp"
#include "loci/oracle.hpp"

namespace loci {

struct FciConfig {
    int max_cond = -1;
    std::optional<unsigned long long> shuffle_seed;
};

struct FciResult {
    MixedGraph pag;
    std::vector<std::optional<NodeSet>> sepsets;  // n*n, engaged iff the pair is separated
    std::vector<std::string> rule_log;
    std::map<std::string, int> rule_counts;
};

namespace detail {

class FciEngine {
public:
    FciEngine(const IndependenceOracle& oracle, const FciConfig& cfg)
        : oracle_(oracle), n_(oracle.variable_count()), g_(oracle.labels()), seps_(static_cast<size_t>(n_) * n_) {
        order_.resize(static_cast<size_t>(n_));
        std::iota(order_.begin(), order_.end(), 0);
        if (cfg.shuffle_seed) {
            std::mt19937_64 rng(*cfg.shuffle_seed);
            for (size_t i = order_.size(); i > 1; --i)
                std::swap(order_[i - 1], order_[rng() % i]);
        }
        build_skeleton(cfg.max_cond);
    }

    FciResult run() {
        unshielded_colliders();
        for (bool ch = true; ch;) {
            ch = rule_r1();
            ch = rule_r2() || ch;
            ch = rule_r3() || ch;
            ch = rule_r4() || ch;
        }
        while (rule_r5()) {
        }
        for (bool ch = true; ch;) {
            ch = rule_r6();
            ch = rule_r7() || ch;
        }
        for (bool ch = true; ch;) {
            ch = rule_r8();
            ch = rule_r9() || ch;
            ch = rule_r10() || ch;
        }
        return FciResult{std::move(g_), std::move(seps_), std::move(log_), std::move(counts_)};
    }

private:
    const IndependenceOracle& oracle_;
    const int n_;
    MixedGraph g_;
    std::vector<std::optional<NodeSet>> seps_;
    std::vector<NodeId> order_;
    std::vector<std::string> log_;
    std::map<std::string, int> counts_;

    const std::optional<NodeSet>& sepset(NodeId a, NodeId b) const {
        return seps_[static_cast<size_t>(a) * static_cast<size_t>(n_) + static_cast<size_t>(b)];
    }

    void build_skeleton(int max_cond) {
        for (NodeId x = 0; x < n_; ++x)
            for (NodeId y = x + 1; y < n_; ++y) {
                if (auto f = find_minimal_independence(oracle_, x, y, max_cond)) {
                    seps_[static_cast<size_t>(x) * static_cast<size_t>(n_) + static_cast<size_t>(y)] = f->query.z;
                    seps_[static_cast<size_t>(y) * static_cast<size_t>(n_) + static_cast<size_t>(x)] = f->query.z;
                } else {
                    g_.add_edge(x, y, Mark::Circle, Mark::Circle);
                }
            }
    }

    // mark at `at` on the edge to `other`; throws on tail/arrow overwrite
    bool strengthen(NodeId at, NodeId other, Mark m) {
        Mark cur = g_.mark_at(at, other);
        if (cur == m) return false;
        if (cur != Mark::Circle)
            throw std::logic_error("rule tried to overwrite a committed mark between " + g_.label(at) + " and " +
                                   g_.label(other));
        g_.set_mark(at, other, m);
        return true;
    }

    void fire(const std::string& rule, NodeId a, NodeId b, const std::string& extra = "") {
        std::string line = rule + ": orient " + g_.label(a) + ' ';
        line += mark_char(g_.mark_at(a, b));
        line += mark_char(g_.mark_at(b, a));
        line += ' ' + g_.label(b);
        if (!extra.empty()) line += " (" + extra + ")";
        log_.push_back(std::move(line));
        ++counts_[rule];
    }

    std::string path_text(const std::vector<NodeId>& p) const {
        std::string out;
        for (NodeId v : p) {
            if (!out.empty()) out += ',';
            out += g_.label(v);
        }
        return out;
    }

    void unshielded_colliders() {
        for (NodeId b : order_)
            for (NodeId a : order_)
                for (NodeId c : order_) {
                    if (a == b || b == c || a == c) continue;
                    if (!g_.adjacent(a, b) || !g_.adjacent(b, c) || g_.adjacent(a, c)) continue;
                    const auto& ss = sepset(a, c);
                    if (!ss || ss->contains(b)) continue;
                    bool s = strengthen(b, a, Mark::Arrow);
                    s = strengthen(b, c, Mark::Arrow) || s;
                    if (s) {
                        log_.push_back("R0b: collider " + g_.label(a) + " *> " + g_.label(b) + " <* " + g_.label(c));
                        ++counts_["R0b"];
                    }
                }
    }

    // a *-> b o-* c with a,c nonadjacent: orient b -> c
    bool rule_r1() {
        bool ch = false;
        for (NodeId b : order_)
            for (NodeId a : order_)
                for (NodeId c : order_) {
                    if (a == b || b == c || a == c) continue;
                    if (!g_.adjacent(a, b) || !g_.adjacent(b, c) || g_.adjacent(a, c)) continue;
                    if (g_.mark_at(b, a) != Mark::Arrow || g_.mark_at(b, c) != Mark::Circle) continue;
                    bool s = strengthen(b, c, Mark::Tail);
                    s = strengthen(c, b, Mark::Arrow) || s;
                    if (s) {
                        fire("R1", b, c);
                        ch = true;
                    }
                }
        return ch;
    }

    // a -> b *-> c (R2a) or a *-> b -> c (R2b), with circle at c on a-c:
    // orient a *-> c
    bool rule_r2() {
        bool ch = false;
        for (NodeId a : order_)
            for (NodeId b : order_)
                for (NodeId c : order_) {
                    if (a == b || b == c || a == c) continue;
                    if (!g_.adjacent(a, b) || !g_.adjacent(b, c) || !g_.adjacent(a, c)) continue;
                    if (g_.mark_at(c, a) != Mark::Circle) continue;
                    const char* rule = nullptr;
                    if (g_.directed_edge(a, b) && g_.mark_at(c, b) == Mark::Arrow)
                        rule = "R2a";
                    else if (g_.mark_at(b, a) == Mark::Arrow && g_.directed_edge(b, c))
                        rule = "R2b";
                    if (!rule) continue;
                    if (strengthen(c, a, Mark::Arrow)) {
                        fire(rule, a, c, "via " + g_.label(b));
                        ch = true;
                    }
                }
        return ch;
    }

    // a *-> b <-* c, a,c nonadjacent, d with circles at d toward both a and c,
    // and circle at b on d-b: orient d *-> b
    bool rule_r3() {
        bool ch = false;
        for (NodeId b : order_)
            for (NodeId d : order_) {
                if (b == d || !g_.adjacent(d, b) || g_.mark_at(b, d) != Mark::Circle) continue;
                for (NodeId a : order_)
                    for (NodeId c : order_) {
                        if (a == c || a == b || a == d || c == b || c == d) continue;
                        if (!g_.adjacent(a, b) || !g_.adjacent(c, b) || g_.adjacent(a, c)) continue;
                        if (g_.mark_at(b, a) != Mark::Arrow || g_.mark_at(b, c) != Mark::Arrow) continue;
                        if (!g_.adjacent(a, d) || !g_.adjacent(c, d)) continue;
                        if (g_.mark_at(d, a) != Mark::Circle || g_.mark_at(d, c) != Mark::Circle) continue;
                        if (strengthen(b, d, Mark::Arrow)) {
                            fire("R3", d, b, "collider " + g_.label(a) + "," + g_.label(c));
                            ch = true;
                        }
                    }
            }
        return ch;
    }

    // Discriminating path <x, q1..qr, z, y> for z: x,y nonadjacent, every q_i
    // a collider on the path and a parent of y. z in sepset(x,y) directs
    // z -> y (R4a), otherwise the tail of the path becomes qr <-> z <-> y
    // (R4b).
    bool rule_r4() {
        bool ch = false;
        for (NodeId y : order_)
            for (NodeId z : order_) {
                if (z == y || !g_.adjacent(z, y) || g_.mark_at(z, y) != Mark::Circle) continue;
                for (NodeId qr : order_) {
                    if (qr == z || qr == y || !g_.adjacent(qr, z)) continue;
                    if (g_.mark_at(qr, z) != Mark::Arrow || !g_.directed_edge(qr, y)) continue;
                    std::vector<NodeId> interior{qr};  // grows from z outward
                    NodeSet on_path = NodeSet::of({z, y, qr});
                    if (discriminating_dfs(interior, on_path, z, y)) ch = true;
                }
            }
        return ch;
    }

    bool discriminating_dfs(std::vector<NodeId>& interior, NodeSet& on_path, NodeId z, NodeId y) {
        const NodeId cur = interior.back();
        for (NodeId v : order_) {
            if (v == cur || on_path.contains(v) || !g_.adjacent(v, cur)) continue;
            if (g_.mark_at(cur, v) != Mark::Arrow) continue;  // cur must be a collider
            if (!g_.adjacent(v, y)) {
                // v is the far endpoint x
                if (g_.mark_at(z, y) != Mark::Circle) return false;  // a prior firing settled this pair
                std::vector<NodeId> path{v};
                path.insert(path.end(), interior.rbegin(), interior.rend());
                path.push_back(z);
                path.push_back(y);
                const auto& ss = sepset(v, y);
                if (!ss) throw std::logic_error("nonadjacent pair without a separating set");
                bool s;
                const NodeId qr = interior.front();
                if (ss->contains(z)) {
                    s = strengthen(z, y, Mark::Tail);
                    s = strengthen(y, z, Mark::Arrow) || s;
                    if (s) fire("R4a", z, y, "path " + path_text(path));
                } else {
                    s = strengthen(qr, z, Mark::Arrow);
                    s = strengthen(z, qr, Mark::Arrow) || s;
                    s = strengthen(z, y, Mark::Arrow) || s;
                    s = strengthen(y, z, Mark::Arrow) || s;
                    if (s) fire("R4b", z, y, "path " + path_text(path));
                }
                if (s) return true;
                continue;
            }
            if (!g_.directed_edge(v, y) || g_.mark_at(v, cur) != Mark::Arrow) continue;
            interior.push_back(v);
            on_path.insert(v);
            bool found = discriminating_dfs(interior, on_path, z, y);
            on_path.erase(v);
            interior.pop_back();
            if (found) return true;
        }
        return false;
    }

    // Circle edge a o-o b closing an uncovered circle path <a,c,...,d,b> with
    // a,d and c,b nonadjacent: the whole cycle becomes undirected.
    bool rule_r5() {
        for (NodeId a : order_)
            for (NodeId b : order_) {
                if (a == b || !g_.adjacent(a, b)) continue;
                if (g_.mark_at(a, b) != Mark::Circle || g_.mark_at(b, a) != Mark::Circle) continue;
                std::vector<NodeId> path{a};
                NodeSet on_path = NodeSet::single(a);
                if (circle_path_dfs(path, on_path, b)) return true;
            }
        return false;
    }

    bool circle_path_dfs(std::vector<NodeId>& path, NodeSet& on_path, NodeId b) {
        const NodeId last = path.back();
        for (NodeId u : order_) {
            if (on_path.contains(u) || u == last || !g_.adjacent(last, u)) continue;
            if (g_.mark_at(last, u) != Mark::Circle || g_.mark_at(u, last) != Mark::Circle) continue;
            if (path.size() >= 2 && g_.adjacent(u, path[path.size() - 2])) continue;  // uncovered
            if (u == b) {
                if (path.size() < 3) continue;                                      // need <a,c,...,d,b>
                if (g_.adjacent(path.front(), last) || g_.adjacent(path[1], b)) continue;
                path.push_back(b);
                bool s = strengthen(path.front(), b, Mark::Tail);
                s = strengthen(b, path.front(), Mark::Tail) || s;
                for (size_t i = 0; i + 1 < path.size(); ++i) {
                    s = strengthen(path[i], path[i + 1], Mark::Tail) || s;
                    s = strengthen(path[i + 1], path[i], Mark::Tail) || s;
                }
                if (s) fire("R5", path.front(), b, "cycle " + path_text(path));
                path.pop_back();
                if (s) return true;
                continue;
            }
            path.push_back(u);
            on_path.insert(u);
            bool found = circle_path_dfs(path, on_path, b);
            on_path.erase(u);
            path.pop_back();
            if (found) return true;
        }
        return false;
    }

    // a -- b with circle at b toward c: orient that circle to a tail
    bool rule_r6() {
        bool ch = false;
        for (NodeId b : order_)
            for (NodeId a : order_) {
                if (a == b || !g_.adjacent(a, b)) continue;
                if (g_.mark_at(a, b) != Mark::Tail || g_.mark_at(b, a) != Mark::Tail) continue;
                for (NodeId c : order_) {
                    if (c == a || c == b || !g_.adjacent(b, c)) continue;
                    if (g_.mark_at(b, c) != Mark::Circle) continue;
                    if (strengthen(b, c, Mark::Tail)) {
                        fire("R6", b, c, "undirected " + g_.label(a) + " -- " + g_.label(b));
                        ch = true;
                    }
                }
            }
        return ch;
    }

    // a -o b with circle at b toward c and a,c nonadjacent: tail at b on b-c
    bool rule_r7() {
        bool ch = false;
        for (NodeId b : order_)
            for (NodeId a : order_) {
                if (a == b || !g_.adjacent(a, b)) continue;
                if (g_.mark_at(a, b) != Mark::Tail || g_.mark_at(b, a) != Mark::Circle) continue;
                for (NodeId c : order_) {
                    if (c == a || c == b || !g_.adjacent(b, c) || g_.adjacent(a, c)) continue;
                    if (g_.mark_at(b, c) != Mark::Circle) continue;
                    if (strengthen(b, c, Mark::Tail)) {
                        fire("R7", b, c);
                        ch = true;
                    }
                }
            }
        return ch;
    }

    // a o-> c with a -> b -> c (R8a) or a -o b -> c (R8b): tail at a on a-c
    bool rule_r8() {
        bool ch = false;
        for (NodeId a : order_)
            for (NodeId c : order_) {
                if (a == c || !g_.adjacent(a, c)) continue;
                if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
                for (NodeId b : order_) {
                    if (b == a || b == c || !g_.adjacent(a, b) || !g_.adjacent(b, c)) continue;
                    if (!g_.directed_edge(b, c)) continue;
                    const char* rule = nullptr;
                    if (g_.directed_edge(a, b))
                        rule = "R8a";
                    else if (g_.mark_at(a, b) == Mark::Tail && g_.mark_at(b, a) == Mark::Circle)
                        rule = "R8b";
                    if (!rule) continue;
                    if (strengthen(a, c, Mark::Tail)) {
                        fire(rule, a, c, "via " + g_.label(b));
                        ch = true;
                    }
                }
            }
        return ch;
    }

    // edge u-v usable in a potentially directed path from u to v
    bool pd_edge(NodeId u, NodeId v) const {
        return g_.adjacent(u, v) && g_.mark_at(u, v) != Mark::Arrow && g_.mark_at(v, u) != Mark::Tail;
    }

    bool upd_path_dfs(std::vector<NodeId>& path, NodeSet& on_path, NodeId target) {
        const NodeId last = path.back();
        for (NodeId u : order_) {
            if (on_path.contains(u) || !pd_edge(last, u)) continue;
            if (path.size() >= 2 && g_.adjacent(u, path[path.size() - 2])) continue;  // uncovered
            if (u == target) return true;
            path.push_back(u);
            on_path.insert(u);
            bool found = upd_path_dfs(path, on_path, target);
            on_path.erase(u);
            path.pop_back();
            if (found) return true;
        }
        return false;
    }

    // a o-> c with an uncovered potentially directed path <a,b,...,c>, b
    // nonadjacent to c: tail at a
    bool rule_r9() {
        bool ch = false;
        for (NodeId a : order_)
            for (NodeId c : order_) {
                if (a == c || !g_.adjacent(a, c)) continue;
                if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
                for (NodeId b : order_) {
                    if (b == a || b == c || g_.adjacent(b, c) || !pd_edge(a, b)) continue;
                    std::vector<NodeId> path{a, b};
                    NodeSet on_path = NodeSet::of({a, b});
                    if (!upd_path_dfs(path, on_path, c)) continue;
                    if (strengthen(a, c, Mark::Tail)) {
                        fire("R9", a, c, "path via " + g_.label(b));
                        ch = true;
                    }
                    break;
                }
            }
        return ch;
    }

    // second nodes m of uncovered potentially directed paths from a to target
    NodeSet upd_second_nodes(NodeId a, NodeId target) {
        NodeSet out;
        for (NodeId m : order_) {
            if (m == a || !pd_edge(a, m)) continue;
            if (m == target) {
                out.insert(m);
                continue;
            }
            std::vector<NodeId> path{a, m};
            NodeSet on_path = NodeSet::of({a, m});
            if (upd_path_dfs(path, on_path, target)) out.insert(m);
        }
        return out;
    }

    // a o-> c, with b -> c <- d and uncovered potentially directed paths from
    // a to b and to d whose second nodes m,n are distinct and nonadjacent:
    // tail at a
    bool rule_r10() {
        bool ch = false;
        for (NodeId a : order_)
            for (NodeId c : order_) {
                if (a == c || !g_.adjacent(a, c)) continue;
                if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
                bool done = false;
                for (NodeId b : order_) {
                    if (done) break;
                    if (b == c || b == a || !g_.directed_edge(b, c)) continue;
                    for (NodeId d : order_) {
                        if (done) break;
                        if (d == c || d == a || d == b || !g_.directed_edge(d, c)) continue;
                        NodeSet ms = upd_second_nodes(a, b);
                        NodeSet ns = upd_second_nodes(a, d);
                        bool hit = false;
                        for (NodeId m : ms) {
                            for (NodeId n : ns)
                                if (m != n && !g_.adjacent(m, n)) {
                                    hit = true;
                                    break;
                                }
                            if (hit) break;
                        }
                        if (!hit) continue;
                        if (strengthen(a, c, Mark::Tail)) {
                            fire("R10", a, c, "parents " + g_.label(b) + "," + g_.label(d));
                            ch = true;
                        }
                        done = true;
                    }
                }
            }
        return ch;
    }
};

}  // namespace detail

inline FciResult run_fci(const IndependenceOracle& oracle, const FciConfig& cfg = {}) {
    return detail::FciEngine(oracle, cfg).run();
}

}  // namespace loci
