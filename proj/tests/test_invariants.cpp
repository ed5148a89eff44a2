#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "ctxforge/catalog.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/theta.hpp"
#include "oracles.hpp"

using namespace ctxforge;

namespace {

WeightedGraph yuoh_weighted() {
    auto g = orthogonality_graph(load_dataset("yuoh13"));
    g.set_weights(catalog::yuoh_weights());
    return g;
}

// Lovasz's eigenvalue bound -n lambda_min / (lambda_max - lambda_min) of the
// adjacency matrix of the complement, exact for edge-transitive graphs. Here
// the relevant matrix is the adjacency of g itself (theta of g with zeros on
// the edges of g).
double eigenvalue_bound(const WeightedGraph& g) {
    const std::size_t n = g.size();
    RMatrix a(n, n);
    for (auto [u, v] : g.edges()) a(u, v) = a(v, u) = 1.0;
    auto es = eigh(a);
    return -static_cast<double>(n) * es.values.front() / (es.values.back() - es.values.front());
}

}  // namespace

TEST(Alpha, Pentagon) { EXPECT_EQ(alpha(cycle_graph(5)).value, 2); }

TEST(Alpha, YuOhWeighted) {
    auto r = alpha(yuoh_weighted());
    EXPECT_EQ(r.value, 11);
    auto g = yuoh_weighted();
    EXPECT_TRUE(is_independent(g, r.witness));
}

TEST(Alpha, Johnson72) { EXPECT_EQ(alpha(johnson(7, 2)).value, 3); }

TEST(Alpha, AgreesWithExhaustiveSearch) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 150; ++t) {
        auto g = oracle::random_graph(rng, 1 + rng() % 12, 0.15 + 0.1 * static_cast<double>(rng() % 6));
        g.set_weights(oracle::random_weights(rng, g.size()));
        auto r = alpha(g);
        EXPECT_EQ(r.value, oracle::alpha_exhaustive(g));
        Rational w = 0;
        for (auto v : r.witness) w += g.weight(v);
        EXPECT_EQ(w, r.value);
        EXPECT_TRUE(is_independent(g, r.witness));
    }
}

TEST(Alpha, ScaleCovariance) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        auto g = oracle::random_graph(rng, 10, 0.35);
        g.set_weights(oracle::random_weights(rng, 10));
        auto base = alpha(g);
        const Rational c = make_rational(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 7));
        auto scaled_w = g.weights();
        for (auto& x : scaled_w) x *= c;
        auto h = g;
        h.set_weights(scaled_w);
        auto scaled = alpha(h);
        EXPECT_EQ(scaled.value, c * base.value);
        EXPECT_EQ(scaled.witness, base.witness);
    }
}

TEST(Alpha, LargeWeightsUseBigIntegers) {
    auto g = cycle_graph(5);
    std::vector<Rational> w(5, Rational{BigInt("1000000000000000000000000")});
    w[0] = make_rational(1, 7);
    g.set_weights(w);
    EXPECT_EQ(alpha(g).value, Rational{BigInt("2000000000000000000000000")});
}

TEST(Chromatic, SmallGraphs) {
    EXPECT_EQ(chromatic_number(cycle_graph(5)).chi, 3);
    EXPECT_EQ(chromatic_number(complete_graph(4)).chi, 4);
    EXPECT_EQ(chromatic_number(WeightedGraph(3)).chi, 1);
    EXPECT_EQ(chromatic_number(WeightedGraph(0)).chi, 0);
}

TEST(Chromatic, Johnson72IsSeven) {
    auto g = johnson(7, 2);
    auto r = chromatic_number(g);
    EXPECT_EQ(r.chi, 7);
    EXPECT_TRUE(is_proper_coloring(g, r.coloring));
    EXPECT_EQ(*std::max_element(r.coloring.begin(), r.coloring.end()), 6);
}

TEST(Chromatic, Johnson72TripleDeletionsSample) {
    // Every triple misses one of the seven 6-cliques {ij : i fixed}, so chi is exactly 6.
    auto g = johnson(7, 2);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        std::vector<std::size_t> all(21);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        auto h = delete_vertices(g, {all[0], all[1], all[2]});
        auto r = chromatic_number(h);
        EXPECT_EQ(r.chi, 6);
        EXPECT_TRUE(is_proper_coloring(h, r.coloring));
    }
}

TEST(Chromatic, AgreesWithExhaustiveColoring) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 80; ++t) {
        auto g = oracle::random_graph(rng, 1 + rng() % 12, 0.2 + 0.1 * static_cast<double>(rng() % 6));
        auto r = chromatic_number(g);
        EXPECT_EQ(r.chi, oracle::chromatic_exhaustive(g));
        EXPECT_TRUE(is_proper_coloring(g, r.coloring));
        EXPECT_EQ(*std::max_element(r.coloring.begin(), r.coloring.end()) + 1, r.chi);
    }
}

TEST(FractionalChromatic, Pentagon) { EXPECT_EQ(fractional_chromatic(cycle_graph(5)).value, make_rational(5, 2)); }

TEST(FractionalChromatic, CompleteGraph) {
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(fractional_chromatic(complete_graph(n)).value, Rational(n));
}

TEST(FractionalChromatic, Johnson72AndPairDeletions) {
    auto g = johnson(7, 2);
    EXPECT_EQ(fractional_chromatic(g).value, 7);
    // Removing two vertices leaves 19 vertices with alpha = 3, so chi_f >= 19/3.
    const Rational expected = make_rational(19, 3);
    EXPECT_EQ(fractional_chromatic(delete_vertices(g, {0, 1})).value, expected);    // adjacent pair {12},{13}
    EXPECT_EQ(fractional_chromatic(delete_vertices(g, {0, 20})).value, expected);   // disjoint pair {12},{67}
}

TEST(FractionalChromatic, VertexTransitiveEqualsNOverAlpha) {
    for (auto g : {cycle_graph(7), johnson(5, 2), complement(johnson(5, 2)), johnson(6, 2)}) {
        Rational n{static_cast<long>(g.size())};
        EXPECT_EQ(fractional_chromatic(g).value, n / alpha(g).value);
    }
}

TEST(FractionalChromatic, DualityIsExact) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        auto g = oracle::random_graph(rng, 3 + rng() % 9, 0.45);
        auto r = fractional_chromatic(g);
        EXPECT_TRUE(verify_lp_certificate(r.lp, r.raw));
        Rational dual_sum = 0;
        for (const auto& y : r.set_weights) dual_sum += y;
        EXPECT_EQ(dual_sum, r.value);
        // Every vertex covered at least once by the fractional cover.
        for (std::size_t v = 0; v < g.size(); ++v) {
            Rational cover = 0;
            for (std::size_t k = 0; k < r.sets.size(); ++k)
                if (std::count(r.sets[k].begin(), r.sets[k].end(), v)) cover += r.set_weights[k];
            EXPECT_GE(cover, 1);
        }
        EXPECT_LE(r.value, Rational(chromatic_number(g).chi));
    }
}

TEST(FractionalPacking, Values) {
    EXPECT_EQ(fractional_packing(johnson(5, 2)).value, make_rational(5, 2));
    EXPECT_EQ(fractional_packing(cycle_graph(5)).value, make_rational(5, 2));
    EXPECT_EQ(fractional_packing(complete_graph(5)).value, 1);
    auto r = fractional_packing(cycle_graph(5));
    for (const auto& x : r.vertex_weights) EXPECT_EQ(x, make_rational(1, 2));
}

TEST(Theta, Johnson52) {
    auto r = lovasz_theta(johnson(5, 2));
    EXPECT_NEAR(r.value, 2.5, 1e-4);
    EXPECT_LE(r.lower, 2.5 + 1e-9);
    EXPECT_GE(r.upper, 2.5 - 1e-9);
}

TEST(Theta, EdgelessGraph) { EXPECT_NEAR(lovasz_theta(WeightedGraph(3)).value, 3.0, 1e-12); }

TEST(Theta, PentagonMatchesEigenvalueBound) {
    auto r = lovasz_theta(cycle_graph(5));
    EXPECT_NEAR(r.value, std::sqrt(5.0), 1e-4);
    EXPECT_NEAR(eigenvalue_bound(cycle_graph(5)), std::sqrt(5.0), 1e-12);
    EXPECT_LE(r.lower, std::sqrt(5.0) + 1e-9);
    EXPECT_GE(r.upper, std::sqrt(5.0) - 1e-9);
}

TEST(Theta, SandwichOnDatasetGraphs) {
    for (auto g : {orthogonality_graph(load_dataset("kcbs5")), orthogonality_graph(load_dataset("yuoh13")),
                   orthogonality_graph(load_dataset("twin10")), johnson(7, 2)}) {
        InvariantReport rep;
        rep.alpha = alpha(g).value;
        auto th = lovasz_theta(g);
        rep.theta = th.value;
        rep.theta_tol = th.tolerance;
        rep.alpha_star = fractional_packing(g).value;
        EXPECT_LE(to_double(rep.alpha), th.value + 1e-3);
        EXPECT_LE(th.value, to_double(*rep.alpha_star) + 2e-3);
        EXPECT_TRUE(rep.consistent());
    }
}

TEST(Theta, VertexTransitiveEigenvalueOracle) {
    // For edge-transitive regular graphs the eigenvalue bound is tight.
    for (auto g : {cycle_graph(7), johnson(5, 2), complement(johnson(5, 2))}) {
        EXPECT_NEAR(lovasz_theta(g).value, eigenvalue_bound(g), 1e-4);
    }
}

TEST(Simplex, SmallRationalLP) {
    // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
    LinearProgram<Rational> lp;
    lp.c = {3, 2};
    lp.a = {{1, 1}, {1, 3}, {1, 0}};
    lp.b = {4, 6, 3};
    auto r = solve_lp(lp);
    EXPECT_EQ(r.optimum, 11);
    EXPECT_EQ(r.primal, (std::vector<Rational>{3, 1}));
    EXPECT_TRUE(verify_lp_certificate(lp, r));
}

TEST(Simplex, Unbounded) {
    LinearProgram<Rational> lp;
    lp.c = {1, 1};
    lp.a = {{1, -1}};
    lp.b = {1};
    EXPECT_THROW(solve_lp(lp), Error);
}

TEST(Simplex, DoubleMatchesRational) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 30; ++t) {
        LinearProgram<Rational> q;
        LinearProgram<double> d;
        const int m = 3 + static_cast<int>(rng() % 5), n = 2 + static_cast<int>(rng() % 4);
        for (int j = 0; j < n; ++j) {
            const long c = static_cast<long>(rng() % 7);
            q.c.push_back(c);
            d.c.push_back(static_cast<double>(c));
        }
        for (int i = 0; i < m; ++i) {
            std::vector<Rational> row;
            std::vector<double> drow;
            for (int j = 0; j < n; ++j) {
                const long a = 1 + static_cast<long>(rng() % 5);
                row.push_back(a);
                drow.push_back(static_cast<double>(a));
            }
            q.a.push_back(row);
            d.a.push_back(drow);
            const long b = static_cast<long>(rng() % 10);
            q.b.push_back(b);
            d.b.push_back(static_cast<double>(b));
        }
        auto rq = solve_lp(q);
        auto rd = solve_lp(d);
        EXPECT_NEAR(to_double(rq.optimum), rd.optimum, 1e-9);
        EXPECT_TRUE(verify_lp_certificate(q, rq));
    }
}
