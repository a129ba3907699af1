#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loci {

// Dense node index within one graph (or one oracle's observed-variable space).
using NodeId = int;

// Raised when an operation would exceed a hard resource guard
// (e.g. equivalence-class enumeration beyond the node limit).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a statement list derives a contradiction. The message names
// the derivation traces of both sides so the offending input can be found.
struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on malformed text input (graph files, fact logs); carries a line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    int line_no;
};

// Set of node indices backed by a 64-bit mask. Iteration runs in increasing
// index order, which is what gives searches their deterministic tie-breaking.
class NodeSet {
public:
    constexpr NodeSet() = default;
    constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}

    static constexpr int max_size() { return 64; }

    static NodeSet single(NodeId v) { return NodeSet(bit(v)); }

    static NodeSet full(int n) {
        check_range(n == 0 ? 0 : n - 1);
        return n == 0 ? NodeSet() : NodeSet(n == 64 ? ~0ULL : (1ULL << n) - 1);
    }

    static NodeSet of(std::initializer_list<NodeId> vs) {
        NodeSet s;
        for (NodeId v : vs) s.insert(v);
        return s;
    }

    bool contains(NodeId v) const { return v >= 0 && v < 64 && (bits_ & bit(v)); }
    bool empty() const { return bits_ == 0; }
    int size() const { return __builtin_popcountll(bits_); }

    void insert(NodeId v) { bits_ |= bit(v); }
    void erase(NodeId v) { check_range(v); bits_ &= ~(1ULL << v); }

    NodeSet with(NodeId v) const { return NodeSet(bits_ | bit(v)); }
    NodeSet without(NodeId v) const { check_range(v); return NodeSet(bits_ & ~(1ULL << v)); }

    NodeSet unite(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
    NodeSet intersect(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
    NodeSet minus(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }

    bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }
    bool intersects(NodeSet o) const { return (bits_ & o.bits_) != 0; }

    std::uint64_t bits() const { return bits_; }

    bool operator==(const NodeSet&) const = default;

    // Lowest set index, or -1 when empty.
    NodeId first() const { return bits_ ? __builtin_ctzll(bits_) : -1; }

    std::vector<NodeId> to_vector() const {
        std::vector<NodeId> v;
        v.reserve(static_cast<size_t>(size()));
        for (std::uint64_t b = bits_; b; b &= b - 1) v.push_back(__builtin_ctzll(b));
        return v;
    }

    struct iterator {
        std::uint64_t rest;
        NodeId operator*() const { return __builtin_ctzll(rest); }
        iterator& operator++() { rest &= rest - 1; return *this; }
        bool operator!=(const iterator& o) const { return rest != o.rest; }
    };
    iterator begin() const { return {bits_}; }
    iterator end() const { return {0}; }

private:
    static void check_range(NodeId v) {
        if (v < 0 || v >= 64) throw std::invalid_argument("node index out of NodeSet range: " + std::to_string(v));
    }
    static std::uint64_t bit(NodeId v) { check_range(v); return 1ULL << v; }

    std::uint64_t bits_ = 0;
};

namespace detail {
inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}
}  // namespace detail

// Calls fn(subset) for every size-k subset of `universe`, in lexicographic
// order of the member index tuples. Returns true if some call returned true
// (and stops there); used by searches that take the first hit.
template <typename Fn>
bool for_each_subset_of_size(NodeSet universe, int k, Fn&& fn) {
    std::vector<NodeId> pool = universe.to_vector();
    const int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) return false;
    std::vector<int> idx(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
        NodeSet s;
        for (int i : idx) s.insert(pool[static_cast<size_t>(i)]);
        if (fn(s)) return true;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == i + n - k) --i;
        if (i < 0) return false;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

// All subsets of `universe`, smallest first, lexicographic within a size.
template <typename Fn>
bool for_each_subset_by_size(NodeSet universe, int max_size, Fn&& fn) {
    for (int k = 0; k <= max_size; ++k)
        if (for_each_subset_of_size(universe, k, fn)) return true;
    return false;
}

}  // namespace loci
