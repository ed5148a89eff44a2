#include <gtest/gtest.h>

#include <random>

#include "ctxforge/ctxforge.hpp"

using namespace ctxforge;

namespace {

Ket random_ket(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return Ket::normalized({{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}});
}

ProjectorSet random_pentagon(std::mt19937_64& rng) {
    ProjectorSet s;
    s.dim = 3;
    s.add(random_ket(rng));
    for (int k = 1; k < 4; ++k) {
        auto v = random_ket(rng).amplitudes();
        const auto& u = s.vectors.back();
        const Complex p = inner(u.amplitudes(), v);
        for (std::size_t r = 0; r < 3; ++r) v[r] -= p * u[r];
        s.add(Ket::normalized(v));
    }
    const auto& a = s.vectors[3];
    const auto& b = s.vectors[0];
    s.add(Ket::normalized({std::conj(a[1] * b[2] - a[2] * b[1]), std::conj(a[2] * b[0] - a[0] * b[2]),
                           std::conj(a[0] * b[1] - a[1] * b[0])}));
    return s;
}

}  // namespace

TEST(Johnson72Sweep, EveryTripleDeletionIsSixColorable) {
    const auto g = johnson(7, 2);
    for (std::size_t a = 0; a < 21; ++a)
        for (std::size_t b = a + 1; b < 21; ++b)
            for (std::size_t c = b + 1; c < 21; ++c) {
                const auto h = delete_vertices(g, {a, b, c});
                const auto r = chromatic_number(h);
                ASSERT_LE(r.chi, 6u) << a << "," << b << "," << c;
                ASSERT_TRUE(is_proper_coloring(h, r.coloring));
            }
}

TEST(Johnson72Sweep, EveryPairDeletionFractionalChromatic) {
    const auto g = johnson(7, 2);
    for (std::size_t u = 0; u < 21; ++u)
        for (std::size_t v = u + 1; v < 21; ++v)
            EXPECT_EQ(fractional_chromatic(delete_vertices(g, {u, v})).value, make_rational(19, 6)) << u << "," << v;
}

TEST(SICExtension, GenericPentagonBecomesCriticalSIC) {
    std::mt19937_64 rng(11);
    const auto s = random_pentagon(rng);
    const auto r = extend_to_critical_sic(s);
    EXPECT_EQ(r.verification.verdict, Verdict::Yes);
    EXPECT_EQ(is_sic(r.set).verdict, Verdict::Yes);
}
