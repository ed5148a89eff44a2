#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"

namespace ctxforge {

using VertexSet = std::vector<std::size_t>;

inline VertexSet mask_to_set(VertexMask m) {
    VertexSet out;
    while (m) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

inline VertexMask set_to_mask(const VertexSet& s) {
    VertexMask m = 0;
    for (auto v : s) {
        if (v >= 64) throw TooLarge("vertex index does not fit a 64-bit mask");
        m |= VertexMask{1} << v;
    }
    return m;
}

constexpr std::size_t kDefaultEnumerationBudget = 1000000;

namespace detail {

// Bron-Kerbosch with Tomita pivoting over adjacency bitmasks.
inline void bron_kerbosch(const std::vector<VertexMask>& adj, VertexMask r, VertexMask p, VertexMask x,
                          std::vector<VertexMask>& out, std::size_t budget) {
    if (!p && !x) {
        if (out.size() >= budget) throw OutputBudgetExceeded("more than " + std::to_string(budget) + " maximal sets");
        out.push_back(r);
        return;
    }
    VertexMask px = p | x;
    std::size_t pivot = 0;
    int best = -1;
    while (px) {
        const auto u = static_cast<std::size_t>(std::countr_zero(px));
        px &= px - 1;
        const int c = std::popcount(p & adj[u]);
        if (c > best) {
            best = c;
            pivot = u;
        }
    }
    VertexMask cand = p & ~adj[pivot];
    while (cand) {
        const auto v = static_cast<std::size_t>(std::countr_zero(cand));
        const VertexMask bit = VertexMask{1} << v;
        cand &= cand - 1;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out, budget);
        p &= ~bit;
        x |= bit;
    }
}

inline std::vector<VertexMask> maximal_clique_masks(const std::vector<VertexMask>& adj, std::size_t budget) {
    const std::size_t n = adj.size();
    std::vector<VertexMask> out;
    if (n == 0) return out;
    const VertexMask all = n == 64 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
    bron_kerbosch(adj, 0, all, 0, out, budget);
    std::sort(out.begin(), out.end(), [](VertexMask a, VertexMask b) {
        // Canonical order: lexicographic on the sorted vertex lists.
        while (a && b) {
            const int x = std::countr_zero(a), y = std::countr_zero(b);
            if (x != y) return x < y;
            a &= a - 1;
            b &= b - 1;
        }
        return !a && b;
    });
    return out;
}

inline std::vector<VertexMask> complement_masks(const std::vector<VertexMask>& adj) {
    const std::size_t n = adj.size();
    const VertexMask all = n == 64 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
    std::vector<VertexMask> out(n);
    for (std::size_t u = 0; u < n; ++u) out[u] = all & ~adj[u] & ~(VertexMask{1} << u);
    return out;
}

}  // namespace detail

inline std::vector<VertexMask> maximal_clique_masks(const WeightedGraph& g,
                                                    std::size_t budget = kDefaultEnumerationBudget) {
    return detail::maximal_clique_masks(g.neighbor_masks(), budget);
}

inline std::vector<VertexMask> maximal_independent_set_masks(const WeightedGraph& g,
                                                             std::size_t budget = kDefaultEnumerationBudget) {
    return detail::maximal_clique_masks(detail::complement_masks(g.neighbor_masks()), budget);
}

inline std::vector<VertexSet> enumerate_maximal_cliques(const WeightedGraph& g,
                                                        std::size_t budget = kDefaultEnumerationBudget) {
    std::vector<VertexSet> out;
    for (auto m : maximal_clique_masks(g, budget)) out.push_back(mask_to_set(m));
    return out;
}

inline std::vector<VertexSet> enumerate_maximal_independent_sets(const WeightedGraph& g,
                                                                 std::size_t budget = kDefaultEnumerationBudget) {
    std::vector<VertexSet> out;
    for (auto m : maximal_independent_set_masks(g, budget)) out.push_back(mask_to_set(m));
    return out;
}

// All cliques of exactly k vertices, in lexicographic order. Works for any n.
inline std::vector<VertexSet> enumerate_k_cliques(const WeightedGraph& g, std::size_t k,
                                                  std::size_t budget = kDefaultEnumerationBudget) {
    std::vector<VertexSet> out;
    if (k == 0) return out;
    VertexSet cur;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (cur.size() == k) {
            if (out.size() >= budget) throw OutputBudgetExceeded("too many cliques");
            out.push_back(cur);
            return;
        }
        for (std::size_t v = from; v < g.size(); ++v) {
            bool ok = true;
            for (auto u : cur)
                if (!g.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline bool is_independent(const WeightedGraph& g, const VertexSet& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (g.adjacent(s[a], s[b])) return false;
    return true;
}

inline bool is_clique(const WeightedGraph& g, const VertexSet& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (s[a] == s[b] || !g.adjacent(s[a], s[b])) return false;
    return true;
}

}  // namespace ctxforge
