#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/projector_set.hpp"
#include "ctxforge/rational.hpp"

namespace ctxforge {

using Edge = std::pair<std::size_t, std::size_t>;
using VertexMask = std::uint64_t;

// Simple undirected graph with nonnegative rational vertex weights.
class WeightedGraph {
public:
    WeightedGraph() = default;
    explicit WeightedGraph(std::size_t n) : n_(n), adj_(n * n, 0), weights_(n, Rational{1}), labels_(n) {
        for (std::size_t i = 0; i < n; ++i) labels_[i] = std::to_string(i + 1);
    }

    WeightedGraph(std::size_t n, const std::vector<Edge>& edges) : WeightedGraph(n) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    std::size_t size() const noexcept { return n_; }

    void add_edge(std::size_t u, std::size_t v) {
        check(u);
        check(v);
        if (u == v) throw Error("self-loops are not allowed");
        adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
    }
    void remove_edge(std::size_t u, std::size_t v) {
        check(u);
        check(v);
        adj_[u * n_ + v] = adj_[v * n_ + u] = 0;
    }
    bool adjacent(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v)
                if (adjacent(u, v)) out.emplace_back(u, v);
        return out;
    }
    std::size_t edge_count() const { return edges().size(); }

    std::vector<std::size_t> neighbors(std::size_t u) const {
        check(u);
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < n_; ++v)
            if (adjacent(u, v)) out.push_back(v);
        return out;
    }
    std::size_t degree(std::size_t u) const { return neighbors(u).size(); }

    // Neighborhood bitmask; only valid for graphs with at most 64 vertices.
    VertexMask neighbor_mask(std::size_t u) const {
        VertexMask m = 0;
        for (std::size_t v = 0; v < n_; ++v)
            if (adjacent(u, v)) m |= VertexMask{1} << v;
        return m;
    }
    std::vector<VertexMask> neighbor_masks() const {
        if (n_ > 64) throw TooLarge("bitmask algorithms support at most 64 vertices");
        std::vector<VertexMask> out(n_);
        for (std::size_t u = 0; u < n_; ++u) out[u] = neighbor_mask(u);
        return out;
    }

    const std::vector<Rational>& weights() const noexcept { return weights_; }
    const Rational& weight(std::size_t u) const { return weights_.at(u); }
    void set_weights(std::vector<Rational> w) {
        if (w.size() != n_) throw WeightArityMismatch("weight count differs from vertex count");
        for (const auto& x : w)
            if (x < 0) throw Error("weights must be nonnegative");
        weights_ = std::move(w);
    }
    void set_weight(std::size_t u, Rational w) {
        check(u);
        if (w < 0) throw Error("weights must be nonnegative");
        weights_[u] = std::move(w);
    }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> l) {
        if (l.size() != n_) throw DimensionMismatch("label count differs from vertex count");
        labels_ = std::move(l);
    }

    bool same_structure(const WeightedGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }
    bool operator==(const WeightedGraph& o) const { return same_structure(o) && weights_ == o.weights_; }

private:
    void check(std::size_t u) const {
        if (u >= n_) throw IndexOutOfRange("vertex " + std::to_string(u) + " out of range");
    }

    std::size_t n_ = 0;
    std::vector<char> adj_;
    std::vector<Rational> weights_;
    std::vector<std::string> labels_;
};

inline WeightedGraph orthogonality_graph(const ProjectorSet& s, double tol = 1e-9) {
    WeightedGraph g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const double ov = overlap(s.vectors[i], s.vectors[j]);
            if (ov <= tol) g.add_edge(i, j);
            else if (ov < 100.0 * tol)
                throw AmbiguousOverlap("overlap " + std::to_string(ov) + " between vectors " + s.labels[i] + " and " +
                                       s.labels[j] + " is neither orthogonal nor clearly nonorthogonal");
        }
    }
    g.set_labels(s.labels);
    return g;
}

inline WeightedGraph complement(const WeightedGraph& g) {
    WeightedGraph out(g.size());
    for (std::size_t u = 0; u < g.size(); ++u)
        for (std::size_t v = u + 1; v < g.size(); ++v)
            if (!g.adjacent(u, v)) out.add_edge(u, v);
    out.set_weights(g.weights());
    out.set_labels(g.labels());
    return out;
}

// Subgraph induced by `keep`, in the given order.
inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<std::size_t>& keep) {
    for (auto v : keep)
        if (v >= g.size()) throw IndexOutOfRange("vertex " + std::to_string(v) + " out of range");
    WeightedGraph out(keep.size());
    std::vector<Rational> w;
    std::vector<std::string> l;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        w.push_back(g.weight(keep[a]));
        l.push_back(g.labels()[keep[a]]);
        for (std::size_t b = a + 1; b < keep.size(); ++b)
            if (keep[a] == keep[b]) throw Error("duplicate vertex in induced subgraph");
            else if (g.adjacent(keep[a], keep[b])) out.add_edge(a, b);
    }
    out.set_weights(std::move(w));
    out.set_labels(std::move(l));
    return out;
}

inline std::vector<std::size_t> remaining_vertices(std::size_t n, const std::vector<std::size_t>& drop) {
    std::vector<char> gone(n, 0);
    for (auto v : drop) {
        if (v >= n) throw IndexOutOfRange("vertex " + std::to_string(v) + " out of range");
        gone[v] = 1;
    }
    std::vector<std::size_t> keep;
    for (std::size_t v = 0; v < n; ++v)
        if (!gone[v]) keep.push_back(v);
    return keep;
}

inline WeightedGraph delete_vertices(const WeightedGraph& g, const std::vector<std::size_t>& drop) {
    return induced_subgraph(g, remaining_vertices(g.size(), drop));
}

// Maximum cardinality search followed by a perfect-elimination check.
inline bool is_chordal(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> label(n, 0);
    std::vector<char> numbered(n, 0);
    std::vector<std::size_t> order;  // visit order; its reverse is a PEO if chordal
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!numbered[v] && (best == n || label[v] > label[best])) best = v;
        numbered[best] = 1;
        order.push_back(best);
        for (std::size_t v = 0; v < n; ++v)
            if (!numbered[v] && g.adjacent(best, v)) ++label[v];
    }
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
    // For each v, its earlier-visited neighbours must form a clique; it suffices
    // that the latest of them is adjacent to all the others.
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::size_t> earlier;
        for (std::size_t u = 0; u < n; ++u)
            if (g.adjacent(u, v) && pos[u] < pos[v]) earlier.push_back(u);
        if (earlier.size() < 2) continue;
        const std::size_t parent =
            *std::max_element(earlier.begin(), earlier.end(), [&](auto a, auto b) { return pos[a] < pos[b]; });
        for (auto u : earlier)
            if (u != parent && !g.adjacent(u, parent)) return false;
    }
    return true;
}

namespace detail {

// Looks for an induced odd cycle of length >= 5 by growing chordless paths
// from each start vertex s, using only vertices larger than s.
inline bool has_odd_hole_masks(const std::vector<VertexMask>& adj) {
    const std::size_t n = adj.size();
    for (std::size_t s = 0; s < n; ++s) {
        VertexMask allowed = 0;
        for (std::size_t v = s + 1; v < n; ++v) allowed |= VertexMask{1} << v;
        // blocked: path vertices and neighbours of interior path vertices.
        auto grow = [&](auto&& self, std::size_t last, VertexMask blocked, std::size_t verts) -> bool {
            VertexMask cand = adj[last] & allowed & ~blocked;
            while (cand) {
                const std::size_t v = static_cast<std::size_t>(std::countr_zero(cand));
                cand &= cand - 1;
                if ((adj[s] >> v) & 1U) {
                    const std::size_t cycle = verts + 1;
                    if (cycle >= 5 && cycle % 2 == 1) return true;
                    continue;
                }
                if (self(self, v, blocked | adj[last] | (VertexMask{1} << last), verts + 1)) return true;
            }
            return false;
        };
        VertexMask first = adj[s] & allowed;
        while (first) {
            const std::size_t p1 = static_cast<std::size_t>(std::countr_zero(first));
            first &= first - 1;
            if (grow(grow, p1, VertexMask{1} << p1, 2)) return true;
        }
    }
    return false;
}

}  // namespace detail

inline bool has_odd_hole(const WeightedGraph& g) {
    if (g.size() > 64) throw TooLarge("odd-hole search supports at most 64 vertices");
    return detail::has_odd_hole_masks(g.neighbor_masks());
}

inline bool has_odd_hole_or_antihole(const WeightedGraph& g) {
    if (g.size() > 64) throw TooLarge("odd-hole search supports at most 64 vertices");
    return has_odd_hole(g) || has_odd_hole(complement(g));
}

// Johnson graph J(n,k): k-subsets of {0..n-1} in lexicographic order, adjacent
// when they share exactly k-1 elements.
inline WeightedGraph johnson(std::size_t n, std::size_t k) {
    if (k == 0 || k > n || n > 20) throw OutOfRange("johnson graph parameters out of range");
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (cur.size() == k) {
            subsets.push_back(cur);
            return;
        }
        for (std::size_t x = from; x < n; ++x) {
            cur.push_back(x);
            self(self, x + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    WeightedGraph g(subsets.size());
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        std::string l;
        for (auto x : subsets[a]) l += std::to_string(x + 1);
        labels.push_back(l);
        for (std::size_t b = a + 1; b < subsets.size(); ++b) {
            std::size_t common = 0;
            for (auto x : subsets[a])
                common += static_cast<std::size_t>(std::count(subsets[b].begin(), subsets[b].end(), x));
            if (common + 1 == k) g.add_edge(a, b);
        }
    }
    g.set_labels(std::move(labels));
    return g;
}

inline WeightedGraph cycle_graph(std::size_t n) {
    WeightedGraph g(n);
    for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

inline WeightedGraph complete_graph(std::size_t n) {
    WeightedGraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

}  // namespace ctxforge
