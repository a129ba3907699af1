#pragma once

// Seeded random causal-system generator. Latent nodes sit at the front of
// the topological order (hidden common causes), selection nodes at the back
// with no children by default. Identical seeds give identical graphs on any
// platform: randomness comes from a fixed 64-bit engine reduced by modulo
// and by explicit 53-bit doubles, never through distribution classes, whose
// output is implementation defined.
//
// Selection nodes without children matter for soundness: an independence
// given the empty set rules out ancestry between the pair only when no
// directed path between them can run through a conditioned selection node.
// Sinks make that impossible by construction. Passing selection_sinks=false
// produces systems outside that guarantee, useful for experiments only.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loci/graph.hpp"

namespace loci {

namespace detail {

// fixed-constant mixer, used to derive independent per-trial seeds
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm the state so nearby seeds diverge immediately
        for (int i = 0; i < 4; ++i) splitmix64(state_);
    }

    std::uint64_t raw() { return splitmix64(state_); }
    int below(int n) { return static_cast<int>(raw() % static_cast<std::uint64_t>(n)); }
    bool chance(double p) { return static_cast<double>(raw() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<size_t>(below(static_cast<int>(i)))]);
    }

private:
    std::uint64_t state_;
};

}  // namespace detail

struct RandomDagSpec {
    int n_observed = 5;
    int n_latent = 0;
    int n_selection = 0;
    double edge_probability = 0.35;
    bool selection_sinks = true;
    int latent_min_children = 2;    // below this a latent projects away silently
    int selection_min_parents = 2;  // below this a selection node conditions nothing new
};

inline CausalDag random_dag(const RandomDagSpec& spec, std::uint64_t seed) {
    if (spec.n_observed < 2) throw std::invalid_argument("random_dag needs at least two observed nodes");
    if (spec.n_latent < 0 || spec.n_selection < 0) throw std::invalid_argument("negative node count");
    if (spec.edge_probability < 0.0 || spec.edge_probability > 1.0)
        throw std::invalid_argument("edge probability outside [0,1]");

    detail::Rng rng(seed);

    // topological order: latents, then observed (selection mixed in when it
    // may have children), selection sinks at the end
    std::vector<std::pair<std::string, Role>> nodes;
    for (int i = 0; i < spec.n_latent; ++i) nodes.emplace_back("L" + std::to_string(i + 1), Role::Latent);
    {
        std::vector<std::pair<std::string, Role>> tail;
        for (int i = 0; i < spec.n_observed; ++i) tail.emplace_back("X" + std::to_string(i + 1), Role::Observed);
        if (!spec.selection_sinks) {
            for (int i = 0; i < spec.n_selection; ++i)
                tail.emplace_back("S" + std::to_string(i + 1), Role::Selection);
            rng.shuffle(tail);
        }
        for (auto& t : tail) nodes.push_back(std::move(t));
        if (spec.selection_sinks)
            for (int i = 0; i < spec.n_selection; ++i)
                nodes.emplace_back("S" + std::to_string(i + 1), Role::Selection);
    }
    const int n = static_cast<int>(nodes.size());

    std::vector<std::vector<bool>> has(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
    for (int i = 0; i < n; ++i) {
        if (spec.selection_sinks && nodes[static_cast<size_t>(i)].second == Role::Selection) continue;
        for (int j = i + 1; j < n; ++j)
            if (rng.chance(spec.edge_probability)) has[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
    }

    // top up structurally idle latents and selection nodes
    for (int i = 0; i < n; ++i) {
        if (nodes[static_cast<size_t>(i)].second != Role::Latent) continue;
        int children = 0;
        std::vector<int> pool;
        for (int j = i + 1; j < n; ++j) {
            if (has[static_cast<size_t>(i)][static_cast<size_t>(j)]) ++children;
            else if (nodes[static_cast<size_t>(j)].second == Role::Observed) pool.push_back(j);
        }
        while (children < spec.latent_min_children && !pool.empty()) {
            size_t pick = static_cast<size_t>(rng.below(static_cast<int>(pool.size())));
            has[static_cast<size_t>(i)][static_cast<size_t>(pool[pick])] = true;
            pool.erase(pool.begin() + static_cast<long>(pick));
            ++children;
        }
    }
    for (int j = 0; j < n; ++j) {
        if (nodes[static_cast<size_t>(j)].second != Role::Selection) continue;
        int parents = 0;
        std::vector<int> pool;
        for (int i = 0; i < j; ++i) {
            if (has[static_cast<size_t>(i)][static_cast<size_t>(j)]) ++parents;
            else if (nodes[static_cast<size_t>(i)].second != Role::Selection) pool.push_back(i);
        }
        while (parents < spec.selection_min_parents && !pool.empty()) {
            size_t pick = static_cast<size_t>(rng.below(static_cast<int>(pool.size())));
            has[static_cast<size_t>(pool[pick])][static_cast<size_t>(j)] = true;
            pool.erase(pool.begin() + static_cast<long>(pick));
            ++parents;
        }
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (has[static_cast<size_t>(i)][static_cast<size_t>(j)]) edges.emplace_back(i, j);
    return CausalDag(std::move(nodes), edges);
}

}  // namespace loci
