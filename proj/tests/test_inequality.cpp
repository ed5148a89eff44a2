#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ctxforge/catalog.hpp"
#include "ctxforge/inequality.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/ks.hpp"
#include "oracles.hpp"

using namespace ctxforge;

namespace {

Ket random_ket(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> n;
    std::vector<Complex> a(d);
    for (auto& x : a) x = {n(rng), n(rng)};
    return Ket::normalized(a);
}

// A random set with some orthogonalities: a random basis plus random vectors
// orthogonal to its first element.
ProjectorSet random_set(std::mt19937_64& rng) {
    ProjectorSet s;
    s.dim = 3;
    const Ket a = random_ket(rng, 3), b0 = random_ket(rng, 3);
    auto orth = [](const Ket& u, const Ket& v) {
        auto x = v.amplitudes();
        const Complex p = inner(u, v);
        for (std::size_t r = 0; r < x.size(); ++r) x[r] -= p * u[r];
        return Ket::normalized(x);
    };
    const Ket b = orth(a, b0);
    std::vector<Complex> c(3);
    c[0] = std::conj(a[1] * b[2] - a[2] * b[1]);
    c[1] = std::conj(a[2] * b[0] - a[0] * b[2]);
    c[2] = std::conj(a[0] * b[1] - a[1] * b[0]);
    s.add(a);
    s.add(b);
    s.add(Ket::normalized(c));
    for (int k = 0; k < 3; ++k) s.add(orth(a, random_ket(rng, 3)));
    s.add(random_ket(rng, 3));
    return s;
}

std::vector<Rational> units(std::size_t n) { return std::vector<Rational>(n, Rational{1}); }

}  // namespace

TEST(BuildInequality, KCBSBoundTwo) {
    auto q = build_nc_inequality(load_dataset("kcbs5"), units(5));
    EXPECT_EQ(q.bound, 2);
    EXPECT_EQ(q.edges.size(), 5u);
    for (const auto& c : q.edge_coeffs) EXPECT_EQ(c, 1);
}

TEST(BuildInequality, YuOhBoundEleven) {
    auto s = load_dataset("yuoh13");
    auto q = build_nc_inequality(s, catalog::yuoh_weights());
    EXPECT_EQ(q.bound, 11);
    for (std::size_t e = 0; e < q.edges.size(); ++e)
        EXPECT_EQ(q.edge_coeffs[e], std::max(q.vertex_coeffs()[q.edges[e].first], q.vertex_coeffs()[q.edges[e].second]));
    auto b = build_bell_inequality(s, catalog::yuoh_weights());
    EXPECT_EQ(b.bound, 11);
}

TEST(BuildInequality, SingleVertex) {
    ProjectorSet s;
    s.dim = 3;
    s.add(Ket({1, 0, 0}));
    EXPECT_EQ(build_nc_inequality(s, {Rational{5}}).bound, 5);
    EXPECT_THROW(build_nc_inequality(s, units(2)), WeightArityMismatch);
    EXPECT_THROW(build_bell_inequality(s, units(2)), WeightArityMismatch);
}

TEST(BuildInequality, BellSymmetricUnderPartySwap) {
    auto b = build_bell_inequality(load_dataset("yuoh13"), catalog::yuoh_weights());
    std::map<std::pair<std::size_t, std::size_t>, Rational> c;
    for (const auto& t : b.terms) c[{t.alice, t.bob}] += t.coeff;
    for (const auto& [key, v] : c) EXPECT_EQ(v, (c[{key.second, key.first}])) << key.first << "," << key.second;
}

TEST(BruteForce, Pentagon) {
    auto s = load_dataset("kcbs5");
    EXPECT_EQ(nchv_bound_bruteforce(build_nc_inequality(s, units(5))).value, 2);
    EXPECT_EQ(lhv_bound_bruteforce(build_bell_inequality(s, units(5))).value, 2);
}

TEST(BruteForce, YuOh) {
    auto s = load_dataset("yuoh13");
    auto nc = nchv_bound_bruteforce(build_nc_inequality(s, catalog::yuoh_weights()));
    EXPECT_EQ(nc.value, 11);
    auto lhv = lhv_bound_bruteforce(build_bell_inequality(s, catalog::yuoh_weights()));
    EXPECT_EQ(lhv.value, 11);
}

TEST(BruteForce, EmptyEdgeSet) {
    WeightedGraph g(6);
    std::mt19937_64 rng(4);
    auto w = oracle::random_weights(rng, 6);
    g.set_weights(w);
    Rational sum = 0;
    for (const auto& x : w) sum += x;
    EXPECT_EQ(nchv_bound_bruteforce(build_nc_inequality(g)).value, sum);
    EXPECT_EQ(lhv_bound_bruteforce(build_bell_inequality(g)).value, sum);
}

TEST(BruteForce, WitnessesAttainTheValue) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        auto g = oracle::random_graph(rng, 2 + rng() % 10, 0.4);
        g.set_weights(oracle::random_weights(rng, g.size()));
        auto q = build_nc_inequality(g);
        auto r = nchv_bound_bruteforce(q);
        Rational v = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (r.alice[i]) v += g.weight(i);
        for (std::size_t e = 0; e < q.edges.size(); ++e)
            if (r.alice[q.edges[e].first] && r.alice[q.edges[e].second]) v -= q.edge_coeffs[e];
        EXPECT_EQ(v, r.value);

        auto b = build_bell_inequality(g);
        auto l = lhv_bound_bruteforce(b);
        Rational u = 0;
        for (const auto& term : b.terms)
            if (l.alice[term.alice] && l.bob[term.bob]) u += term.coeff;
        EXPECT_EQ(u, l.value);
    }
}

TEST(BruteForce, TooLarge) {
    WeightedGraph g(31);
    EXPECT_THROW(nchv_bound_bruteforce(build_nc_inequality(g)), TooLarge);
    EXPECT_THROW(lhv_bound_bruteforce(build_bell_inequality(g)), TooLarge);
}

TEST(BoundEquivalence, DatasetsAndRandomGraphs) {
    for (const auto& name : catalog::names()) {
        auto g = load_graph(name);
        const auto a = alpha(g).value;
        EXPECT_EQ(nchv_bound_bruteforce(build_nc_inequality(g)).value, a) << name;
        EXPECT_EQ(lhv_bound_bruteforce(build_bell_inequality(g)).value, a) << name;
    }
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        auto g = oracle::random_graph(rng, 1 + rng() % 12, 0.15 + 0.1 * static_cast<double>(rng() % 6));
        g.set_weights(oracle::random_weights(rng, g.size()));
        const auto a = oracle::alpha_exhaustive(g);
        EXPECT_EQ(nchv_bound_bruteforce(build_nc_inequality(g)).value, a);
        EXPECT_EQ(lhv_bound_bruteforce(build_bell_inequality(g)).value, a);
    }
}

TEST(QuantumValue, KCBSUniformState) {
    auto s = load_dataset("kcbs5");
    auto rho = DensityMatrix::pure(Ket::normalized({1, 1, 1}));
    EXPECT_NEAR(quantum_nc_value(s, units(5), rho), 2.0 + 1.0 / 9.0, 1e-12);
}

TEST(QuantumValue, YuOhAnyState) {
    auto s = load_dataset("yuoh13");
    std::mt19937_64 rng(3);
    EXPECT_NEAR(quantum_nc_value(s, catalog::yuoh_weights(), DensityMatrix::maximally_mixed(3)), 35.0 / 3.0, 1e-12);
    for (int t = 0; t < 100; ++t)
        EXPECT_NEAR(quantum_nc_value(s, catalog::yuoh_weights(), DensityMatrix::pure(random_ket(rng, 3))), 35.0 / 3.0, 1e-10);
}

TEST(QuantumValue, StateOutsideTheSupport) {
    ProjectorSet s;
    s.dim = 3;
    s.add(Ket({1, 0, 0}));
    s.add(Ket({0, 1, 0}));
    EXPECT_NEAR(quantum_nc_value(s, units(2), DensityMatrix::pure(Ket({0, 0, 1}))), 0.0, 1e-15);
    EXPECT_THROW(quantum_nc_value(s, units(2), DensityMatrix::maximally_mixed(2)), DimensionMismatch);
}

TEST(QuantumValue, YuOhBell) {
    auto s = load_dataset("yuoh13");
    EXPECT_NEAR(quantum_bell_value(s, conjugate_set(s), catalog::yuoh_weights(), entangled_state(3)), 35.0 / 3.0, 1e-10);
}

TEST(QuantumValue, DiagonalAndEdgeTerms) {
    auto s = load_dataset("yuoh13");
    auto sb = conjugate_set(s);
    auto psi = entangled_state(3);
    for (std::size_t i = 0; i < s.size(); ++i)
        EXPECT_NEAR(bipartite_expectation(psi.matrix(), s.projector(i).matrix(), sb.projector(i).matrix()).real(), 1.0 / 3.0, 1e-12);
    for (auto [i, j] : orthogonality_graph(s).edges())
        EXPECT_NEAR(bipartite_expectation(psi.matrix(), s.projector(i).matrix(), sb.projector(j).matrix()).real(), 0.0, 1e-12);
}

TEST(QuantumValue, DimensionChecks) {
    auto s = load_dataset("kcbs5");
    EXPECT_THROW(quantum_bell_value(s, conjugate_set(s), units(5), DensityMatrix::maximally_mixed(3)), DimensionMismatch);
    EXPECT_THROW(quantum_bell_value(s, load_dataset("yuoh13"), units(5), entangled_state(3)), DimensionMismatch);
}

TEST(ValueTransfer, DatasetsAndRandomSets) {
    for (const auto& name : catalog::names()) {
        auto s = load_dataset(name);
        std::mt19937_64 rng(5);
        auto w = oracle::random_weights(rng, s.size());
        const double nc = quantum_nc_value(s, w, DensityMatrix::maximally_mixed(s.dim));
        const double bell = quantum_bell_value(s, conjugate_set(s), w, entangled_state(s.dim));
        EXPECT_NEAR(nc, bell, 1e-10) << name;
    }
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        auto s = random_set(rng);
        auto w = oracle::random_weights(rng, s.size());
        EXPECT_NEAR(quantum_nc_value(s, w, DensityMatrix::maximally_mixed(3)),
                    quantum_bell_value(s, conjugate_set(s), w, entangled_state(3)), 1e-10);
    }
}

TEST(ValueTransfer, YuOhDeletionsLoseTheViolation) {
    // With an NC model for the maximally mixed state, sum w / d <= alpha(w) for every w:
    // the LP maximum of sum w subject to alpha(w) <= 1 is chi_f.
    auto s = load_dataset("yuoh13");
    std::mt19937_64 rng(7);
    for (std::size_t v = 0; v < s.size(); ++v) {
        auto t = s.without({v});
        auto g = orthogonality_graph(t);
        ASSERT_TRUE(maxmixed_nc_model(g, 3).feasible) << v;
        EXPECT_LE(fractional_chromatic(g).value, 3);
        for (int k = 0; k < 20; ++k) {
            auto w = oracle::random_weights(rng, t.size());
            auto b = build_bell_inequality(t, w);
            EXPECT_LE(quantum_bell_value(t, conjugate_set(t), w, entangled_state(3)), to_double(b.bound) + 1e-6);
        }
    }
}

TEST(SampleBell, YuOhMillionRounds) {
    auto s = load_dataset("yuoh13");
    auto b = build_bell_inequality(s, catalog::yuoh_weights());
    auto r = sample_bell_rounds(entangled_state(3), b, s, conjugate_set(s), 1000000, 42);
    EXPECT_LT(std::fabs(r.estimate - 35.0 / 3.0), 3 * r.stderr_);
    EXPECT_GT(r.stderr_, 0.0);
}

TEST(SampleBell, SingleRoundAndDeterminism) {
    auto s = load_dataset("yuoh13");
    auto b = build_bell_inequality(s, catalog::yuoh_weights());
    auto sb = conjugate_set(s);
    auto one = sample_bell_rounds(entangled_state(3), b, s, sb, 1, 9);
    EXPECT_TRUE(std::isnan(one.stderr_));
    bool is_term = one.estimate == 0.0;
    for (const auto& t : b.terms)
        is_term = is_term || std::fabs(one.estimate - static_cast<double>(b.terms.size()) * to_double(t.coeff)) < 1e-12;
    EXPECT_TRUE(is_term);
    auto x = sample_bell_rounds(entangled_state(3), b, s, sb, 5000, 77);
    auto y = sample_bell_rounds(entangled_state(3), b, s, sb, 5000, 77);
    EXPECT_EQ(x.estimate, y.estimate);
    EXPECT_EQ(x.stderr_, y.stderr_);
    EXPECT_THROW(sample_bell_rounds(entangled_state(3), b, s, sb, 0, 1), Error);
}

TEST(SampleBell, StderrScalesAsInverseSqrtRounds) {
    auto s = load_dataset("yuoh13");
    auto b = build_bell_inequality(s, catalog::yuoh_weights());
    auto sb = conjugate_set(s);
    auto a = sample_bell_rounds(entangled_state(3), b, s, sb, 20000, 1);
    auto c = sample_bell_rounds(entangled_state(3), b, s, sb, 80000, 2);
    EXPECT_NEAR(a.stderr_ / c.stderr_, 2.0, 0.15);
}

TEST(SampleSequential, YuOhBothEstimators) {
    auto s = load_dataset("yuoh13");
    auto r = sample_sequential_rounds(s, catalog::yuoh_weights(), entangled_state(3), 1000000, 5);
    EXPECT_LT(std::fabs(r.nc.estimate - 35.0 / 3.0), 3 * r.nc.stderr_);
    EXPECT_LT(std::fabs(r.bell.estimate - 35.0 / 3.0), 3 * r.bell.stderr_);
}

TEST(SampleSequential, RepeatabilityOnEigenstate) {
    auto s = load_dataset("yuoh13");
    auto sb = conjugate_set(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<Complex> amp(9);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) amp[a * 3 + b] = s.vectors[i][a] * sb.vectors[i][b];
        auto state = DensityMatrix::pure(Ket::normalized(amp));
        auto same = sequential_outcomes(state, s.projector(i).matrix(), s.projector(i).matrix(), sb.projector(i).matrix());
        EXPECT_NEAR(same[7], 1.0, 1e-12);
        for (auto [u, v] : orthogonality_graph(s).edges()) {
            if (u != i && v != i) continue;
            const std::size_t j = u == i ? v : u;
            auto o = sequential_outcomes(state, s.projector(i).matrix(), s.projector(j).matrix(), sb.projector(i).matrix());
            EXPECT_NEAR(o[4 + 0 + 1], 1.0, 1e-12);  // a1 = 1, a2 = 0, b = 1
        }
    }
}

TEST(SampleSequential, FirstMarginalIndependentOfSecondChoice) {
    auto s = load_dataset("yuoh13");
    auto r = sample_sequential_rounds(s, catalog::yuoh_weights(), entangled_state(3), 100000, 11);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<std::array<double, 2>> table;
        for (std::size_t t = 0; t < r.terms.size(); ++t) {
            if (r.terms[t].alice != i) continue;
            std::array<double, 2> row{};
            for (std::size_t o = 0; o < 8; ++o) row[o >> 2] += static_cast<double>(r.tallies[t][o]);
            table.push_back(row);
        }
        ASSERT_GE(table.size(), 2u);
        double total = 0, col[2] = {0, 0};
        std::vector<double> rows;
        for (const auto& row : table) {
            rows.push_back(row[0] + row[1]);
            col[0] += row[0];
            col[1] += row[1];
            total += row[0] + row[1];
        }
        double chi2 = 0;
        for (std::size_t k = 0; k < table.size(); ++k)
            for (int a = 0; a < 2; ++a) {
                const double e = rows[k] * col[a] / total;
                chi2 += (table[k][static_cast<std::size_t>(a)] - e) * (table[k][static_cast<std::size_t>(a)] - e) / e;
            }
        boost::math::chi_squared dist(static_cast<double>(table.size() - 1));
        EXPECT_GT(1.0 - boost::math::cdf(dist, chi2), 1e-3) << "vertex " << i << " chi2 " << chi2;
    }
}

TEST(Game, YuOhMapsBack) {
    auto s = load_dataset("yuoh13");
    auto b = build_bell_inequality(s, catalog::yuoh_weights());
    const double q = quantum_bell_value(s, conjugate_set(s), catalog::yuoh_weights(), entangled_state(3));
    auto g = to_nonlocal_game(b, q);
    Rational total = 0;
    for (const auto& x : g.questions) total += x.probability;
    EXPECT_EQ(total, 1);
    EXPECT_EQ((g.classical_value - g.map.offset) / g.map.scale, lhv_bound_bruteforce(b).value);
    EXPECT_EQ((g.classical_value - g.map.offset) / g.map.scale, 11);
    EXPECT_NEAR((*g.quantum_value - to_double(g.map.offset)) / to_double(g.map.scale), 35.0 / 3.0, 1e-9);
    EXPECT_GT(*g.quantum_value, to_double(g.classical_value));
    EXPECT_NEAR(game_value(g, s, conjugate_set(s), entangled_state(3)), *g.quantum_value, 1e-10);
}

TEST(Game, SinglePositiveTerm) {
    ProjectorSet s;
    s.dim = 3;
    s.add(Ket({1, 0, 0}));
    auto b = build_bell_inequality(s, {Rational{5}});
    auto g = to_nonlocal_game(b);
    ASSERT_EQ(g.questions.size(), 1u);
    EXPECT_EQ(g.classical_value, 1);
    // The product state |v>|v*> wins with certainty as well.
    auto state = DensityMatrix::pure(Ket({1, 0, 0, 0, 0, 0, 0, 0, 0}));
    EXPECT_NEAR(game_value(g, s, conjugate_set(s), state), to_double(g.classical_value), 1e-12);
}

TEST(Game, LHVWitnessStrategy) {
    std::mt19937_64 rng(14);
    std::vector<WeightedGraph> graphs{load_graph("yuoh13"), load_graph("kcbs5")};
    for (int t = 0; t < 20; ++t) {
        auto g = oracle::random_graph(rng, 2 + rng() % 10, 0.35);
        g.set_weights(oracle::random_weights(rng, g.size()));
        graphs.push_back(g);
    }
    for (const auto& g : graphs) {
        if (std::all_of(g.weights().begin(), g.weights().end(), [](const Rational& x) { return x == 0; })) continue;
        auto b = build_bell_inequality(g);
        auto lhv = lhv_bound_bruteforce(b);
        auto game = to_nonlocal_game(b);
        EXPECT_EQ(game_value(game, lhv.alice, lhv.bob), game.map.scale * lhv.value + game.map.offset);
        EXPECT_EQ(game_value(game, lhv.alice, lhv.bob), game.classical_value);
    }
}
