#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ctxforge/cliques.hpp"
#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/rational.hpp"
#include "ctxforge/simplex.hpp"

namespace ctxforge {

struct AlphaResult {
    Rational value;
    VertexSet witness;  // a maximum-weight independent set
};

namespace detail {

template <typename W>
class MaxWeightIndependentSet {
public:
    MaxWeightIndependentSet(std::vector<VertexMask> adj, std::vector<W> w) : adj_(std::move(adj)), w_(std::move(w)) {}

    std::pair<W, VertexMask> solve() {
        const std::size_t n = adj_.size();
        const VertexMask all = n == 64 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
        best_ = W{};
        best_set_ = 0;
        have_best_ = false;
        search(W{}, 0, all);
        return {best_, best_set_};
    }

private:
    // Sum over a greedy clique partition of the heaviest weight in each clique.
    W cover_bound(VertexMask p) const {
        W bound{};
        while (p) {
            const auto v = static_cast<std::size_t>(std::countr_zero(p));
            VertexMask clique = VertexMask{1} << v;
            W heaviest = w_[v];
            VertexMask cand = p & adj_[v];
            while (cand) {
                const auto u = static_cast<std::size_t>(std::countr_zero(cand));
                clique |= VertexMask{1} << u;
                if (w_[u] > heaviest) heaviest = w_[u];
                cand &= adj_[u];
            }
            bound += heaviest;
            p &= ~clique;
        }
        return bound;
    }

    void search(const W& cur, VertexMask set, VertexMask p) {
        if (!p) {
            if (!have_best_ || cur > best_) {
                best_ = cur;
                best_set_ = set;
                have_best_ = true;
            }
            return;
        }
        if (have_best_ && cur + cover_bound(p) <= best_) return;
        const auto v = static_cast<std::size_t>(std::countr_zero(p));
        const VertexMask bit = VertexMask{1} << v;
        search(cur + w_[v], set | bit, p & ~adj_[v] & ~bit);
        search(cur, set, p & ~bit);
    }

    std::vector<VertexMask> adj_;
    std::vector<W> w_;
    W best_{};
    VertexMask best_set_ = 0;
    bool have_best_ = false;
};

}  // namespace detail

// Exact weighted independence number. Weights are scaled to integers; 64-bit
// arithmetic is used when the total fits, otherwise big integers.
inline AlphaResult alpha(const WeightedGraph& g) {
    if (g.size() > 64) throw TooLarge("alpha supports at most 64 vertices");
    const auto adj = g.neighbor_masks();
    const BigInt scale = lcm_of_denominators(g.weights());
    std::vector<BigInt> scaled;
    BigInt total = 0;
    for (const auto& w : g.weights()) {
        scaled.push_back(numerator_of(w) * (scale / denominator_of(w)));
        total += scaled.back();
    }
    VertexMask set = 0;
    if (total < BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        std::vector<std::int64_t> w;
        for (const auto& x : scaled) w.push_back(x.convert_to<std::int64_t>());
        set = detail::MaxWeightIndependentSet<std::int64_t>(adj, w).solve().second;
    } else {
        set = detail::MaxWeightIndependentSet<BigInt>(adj, scaled).solve().second;
    }
    AlphaResult r;
    r.witness = mask_to_set(set);
    r.value = 0;
    for (auto v : r.witness) r.value += g.weight(v);
    return r;
}

// Weighted independence number of an arbitrary weight vector on g's structure.
inline Rational alpha_value(const WeightedGraph& g, const std::vector<Rational>& w) {
    WeightedGraph h = g;
    h.set_weights(w);
    return alpha(h).value;
}

struct ColoringResult {
    int chi = 0;
    std::vector<int> coloring;  // color per vertex, 0-based
};

struct FractionalResult {
    Rational value;
    std::vector<Rational> vertex_weights;  // optimal LP primal (one per vertex)
    std::vector<VertexSet> sets;           // maximal independent sets or cliques
    std::vector<Rational> set_weights;     // optimal LP dual (one per set)
    LinearProgram<Rational> lp;
    RationalLPResult raw;
};

namespace detail {

inline FractionalResult set_packing_lp(const WeightedGraph& g, const std::vector<VertexSet>& sets,
                                       const std::vector<Rational>& objective) {
    FractionalResult out;
    out.sets = sets;
    const std::size_t n = g.size();
    out.lp.c = objective;
    for (const auto& s : sets) {
        std::vector<Rational> row(n, Rational{0});
        for (auto v : s) row[v] = 1;
        out.lp.a.push_back(std::move(row));
        out.lp.b.push_back(1);
    }
    out.raw = solve_lp(out.lp);
    out.value = out.raw.optimum;
    out.vertex_weights = out.raw.primal;
    out.set_weights = out.raw.dual;
    return out;
}

}  // namespace detail

// chi_f(G) = max sum_v x_v subject to x(I) <= 1 for every maximal independent
// set I. The dual solution is a minimum fractional cover by independent sets.
inline FractionalResult fractional_chromatic(const WeightedGraph& g,
                                             std::size_t budget = kDefaultEnumerationBudget) {
    if (g.size() == 0) return {};
    return detail::set_packing_lp(g, enumerate_maximal_independent_sets(g, budget),
                                  std::vector<Rational>(g.size(), Rational{1}));
}

// alpha*(G, w) = max sum_v w_v x_v subject to x(C) <= 1 for every maximal clique C.
inline FractionalResult fractional_packing(const WeightedGraph& g, std::size_t budget = kDefaultEnumerationBudget) {
    if (g.size() == 0) return {};
    return detail::set_packing_lp(g, enumerate_maximal_cliques(g, budget), g.weights());
}

namespace detail {

// Greedy DSATUR coloring; returns a proper coloring.
inline std::vector<int> dsatur(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> color(n, -1);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        std::size_t pick_sat = 0, pick_deg = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            std::vector<char> seen(n + 1, 0);
            std::size_t sat = 0, deg = 0;
            for (std::size_t u = 0; u < n; ++u) {
                if (!g.adjacent(u, v)) continue;
                if (color[u] >= 0 && !seen[static_cast<std::size_t>(color[u])]) {
                    seen[static_cast<std::size_t>(color[u])] = 1;
                    ++sat;
                }
                if (color[u] < 0) ++deg;
            }
            if (pick == n || sat > pick_sat || (sat == pick_sat && deg > pick_deg)) {
                pick = v;
                pick_sat = sat;
                pick_deg = deg;
            }
        }
        std::vector<char> used(n + 1, 0);
        for (std::size_t u = 0; u < n; ++u)
            if (g.adjacent(u, pick) && color[u] >= 0) used[static_cast<std::size_t>(color[u])] = 1;
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        color[pick] = c;
    }
    return color;
}

// Exact test: can the vertices be covered by k of the given maximal
// independent sets? Branches on the uncovered vertex with the fewest options.
class IndependentSetCover {
public:
    IndependentSetCover(std::size_t n, std::vector<VertexMask> sets) : n_(n), sets_(std::move(sets)) {
        max_size_ = 0;
        for (auto s : sets_) max_size_ = std::max(max_size_, std::popcount(s));
    }

    std::optional<std::vector<VertexMask>> cover(int k) {
        chosen_.clear();
        const VertexMask all = n_ == 64 ? ~VertexMask{0} : ((VertexMask{1} << n_) - 1);
        if (search(all, k)) return chosen_;
        return std::nullopt;
    }

private:
    bool search(VertexMask uncovered, int k) {
        if (!uncovered) return true;
        if (k == 0) return false;
        if (max_size_ * k < std::popcount(uncovered)) return false;
        std::size_t pick = n_;
        int pick_opts = std::numeric_limits<int>::max();
        VertexMask rest = uncovered;
        while (rest) {
            const auto v = static_cast<std::size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            int opts = 0;
            for (auto s : sets_)
                if ((s >> v) & 1U) ++opts;
            if (opts < pick_opts) {
                pick = v;
                pick_opts = opts;
            }
        }
        // Try sets covering the most uncovered vertices first.
        std::vector<VertexMask> cands;
        for (auto s : sets_)
            if ((s >> pick) & 1U) cands.push_back(s);
        std::stable_sort(cands.begin(), cands.end(), [&](VertexMask a, VertexMask b) {
            return std::popcount(a & uncovered) > std::popcount(b & uncovered);
        });
        for (auto s : cands) {
            chosen_.push_back(s);
            if (search(uncovered & ~s, k - 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    std::size_t n_;
    std::vector<VertexMask> sets_;
    int max_size_;
    std::vector<VertexMask> chosen_;
};

}  // namespace detail

inline bool is_proper_coloring(const WeightedGraph& g, const std::vector<int>& c) {
    if (c.size() != g.size()) return false;
    for (auto [u, v] : g.edges())
        if (c[u] == c[v]) return false;
    for (int x : c)
        if (x < 0) return false;
    return true;
}

// Exact chromatic number with a witness coloring. The lower bound is the
// ceiling of chi_f; the upper bound comes from DSATUR; values in between are
// decided by an exact cover search over maximal independent sets.
inline ColoringResult chromatic_number(const WeightedGraph& g, std::size_t budget = kDefaultEnumerationBudget) {
    if (g.size() > 32) throw TooLarge("chromatic_number supports at most 32 vertices");
    ColoringResult res;
    if (g.size() == 0) return res;
    std::vector<int> best = detail::dsatur(g);
    int upper = *std::max_element(best.begin(), best.end()) + 1;

    const auto sets = maximal_independent_set_masks(g, budget);
    const auto frac = detail::set_packing_lp(g, enumerate_maximal_independent_sets(g, budget),
                                             std::vector<Rational>(g.size(), Rational{1}));
    const BigInt num = numerator_of(frac.value), den = denominator_of(frac.value);
    int lower = static_cast<int>(((num + den - 1) / den).convert_to<long long>());

    detail::IndependentSetCover solver(g.size(), sets);
    while (lower < upper) {
        const int k = upper - 1;
        auto cover = solver.cover(k);
        if (!cover) break;
        std::vector<int> col(g.size(), -1);
        for (std::size_t c = 0; c < cover->size(); ++c)
            for (auto v : mask_to_set((*cover)[c]))
                if (col[v] < 0) col[v] = static_cast<int>(c);
        best = col;
        upper = k;
    }
    res.chi = upper;
    res.coloring = best;
    return res;
}

struct InvariantReport {
    Rational alpha;
    std::optional<int> chi;
    std::optional<Rational> chi_f;
    std::optional<double> theta;
    std::optional<double> theta_tol;
    std::optional<Rational> alpha_star;

    // Sandwich alpha <= theta <= alpha*, and chi_f <= chi.
    bool consistent(double tol = 1e-3) const {
        if (theta) {
            const double t = *theta, e = theta_tol.value_or(tol);
            if (to_double(alpha) > t + e + tol) return false;
            if (alpha_star && t > to_double(*alpha_star) + e + tol) return false;
        }
        if (chi && chi_f && *chi_f > Rational{*chi}) return false;
        return true;
    }
};

}  // namespace ctxforge
