#include <gtest/gtest.h>

#include <random>

#include "ctxforge/catalog.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/linalg.hpp"
#include "oracles.hpp"

using namespace ctxforge;

namespace {

CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = Complex(g(rng), g(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

Ket random_ket(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(d);
    for (auto& x : a) x = Complex(g(rng), g(rng));
    return Ket::normalized(a);
}

DensityMatrix random_density(std::mt19937_64& rng, std::size_t d) {
    CMatrix m(d, d);
    std::uniform_real_distribution<double> u(0, 1);
    double total = 0;
    std::vector<double> p(d);
    for (auto& x : p) total += (x = u(rng));
    for (std::size_t k = 0; k < d; ++k) {
        Ket v = random_ket(rng, d);
        m += outer(v, v) * Complex(p[k] / total, 0);
    }
    return DensityMatrix(m);
}

}  // namespace

TEST(Projector, FromBasisKet) {
    auto p = projector_from_ket(Ket({1, 0, 0}));
    EXPECT_EQ(p.rank(), 1);
    EXPECT_EQ(p.matrix()(0, 0), Complex(1, 0));
    EXPECT_EQ(p.matrix()(1, 1), Complex(0, 0));
}

TEST(Projector, FromKCBSSecondVector) {
    const double r = 1 / std::sqrt(2.0);
    auto p = projector_from_ket(Ket({0, r, r}));
    for (std::size_t i = 1; i < 3; ++i)
        for (std::size_t j = 1; j < 3; ++j) EXPECT_NEAR(p.matrix()(i, j).real(), 0.5, 1e-15);
    EXPECT_EQ(p.matrix()(0, 0), Complex(0, 0));
    EXPECT_LE((p.matrix() * p.matrix() - p.matrix()).max_abs(), 1e-9);
}

TEST(Projector, UnnormalizedRejected) { EXPECT_THROW(Ket({2, 0, 0}), NotNormalized); }

TEST(Eigen, IdentityAndRankOne) {
    EXPECT_NEAR(min_eigenvalue(CMatrix::identity(3)), 1.0, 1e-14);
    EXPECT_NEAR(min_eigenvalue(projector_from_ket(Ket({1, 0, 0})).matrix()), 0.0, 1e-14);
}

TEST(Eigen, YuOhWeightedSumIsScalar) {
    auto s = load_dataset("yuoh13");
    std::vector<double> w;
    for (const auto& x : catalog::yuoh_weights()) w.push_back(to_double(x));
    const CMatrix m = s.weighted_sum(w);
    EXPECT_NEAR(min_eigenvalue(m), 35.0 / 3.0, 1e-10);
    EXPECT_NEAR(max_eigenvalue(m), 35.0 / 3.0, 1e-10);
}

TEST(Eigen, NonHermitianRejected) {
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(min_eigenvalue(m), NotHermitian);
}

TEST(Eigen, AgreesWithCubicFormulaOnRandom3x3) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        CMatrix m = random_hermitian(rng, 3);
        std::complex<double> raw[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) raw[i][j] = m(i, j);
        EXPECT_NEAR(min_eigenvalue(m), oracle::min_eig_3x3(raw), 1e-8);
    }
}

TEST(Eigen, ReconstructsRandomHermitian) {
    std::mt19937_64 rng(3);
    for (std::size_t n : {2u, 5u, 12u, 36u}) {
        CMatrix m = random_hermitian(rng, n);
        auto es = eigh(m);
        CMatrix d(n, n);
        for (std::size_t k = 0; k < n; ++k) d(k, k) = es.values[k];
        CMatrix back = es.vectors * d * es.vectors.adjoint();
        EXPECT_LE((back - m).max_abs(), 1e-10 * std::max(1.0, m.max_abs())) << n;
        for (std::size_t k = 1; k < n; ++k) EXPECT_LE(es.values[k - 1], es.values[k]);
    }
}

TEST(Luders, EigenstateIsUnchanged) {
    Ket v = Ket::normalized({1, 2, Complex(0, 1)});
    auto out = luders_update(DensityMatrix::pure(v), projector_from_ket(v), 1);
    EXPECT_NEAR(out.probability, 1.0, 1e-12);
    EXPECT_LE((out.state.matrix() - outer(v, v)).max_abs(), 1e-12);
}

TEST(Luders, MaximallyMixedCollapsesOntoProjector) {
    auto p = projector_from_ket(Ket::normalized({1, 1, 1}));
    auto out = luders_update(DensityMatrix::maximally_mixed(3), p, 1);
    EXPECT_NEAR(out.probability, 1.0 / 3.0, 1e-14);
    EXPECT_LE((out.state.matrix() - p.matrix()).max_abs(), 1e-12);
}

TEST(Luders, ZeroProbabilityBranch) {
    auto rho = DensityMatrix::pure(Ket({1, 0, 0}));
    EXPECT_THROW(luders_update(rho, projector_from_ket(Ket({0, 1, 0})), 1), ZeroProbabilityBranch);
    EXPECT_THROW(luders_update(rho, projector_from_ket(Ket({1, 0, 0})), 0), ZeroProbabilityBranch);
}

TEST(Luders, BranchProbabilitiesSumToOne) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        auto rho = random_density(rng, 3);
        auto p = projector_from_ket(random_ket(rng, 3));
        double total = 0;
        for (int o : {0, 1}) {
            try {
                total += luders_update(rho, p, o).probability;
            } catch (const ZeroProbabilityBranch&) {
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(MaximallyEntangled, Dimensions) {
    Ket k3 = maximally_entangled(3);
    ASSERT_EQ(k3.dim(), 9u);
    for (std::size_t i = 0; i < 9; ++i)
        EXPECT_NEAR(std::abs(k3[i]), (i == 0 || i == 4 || i == 8) ? 1 / std::sqrt(3.0) : 0.0, 1e-15);
    Ket k2 = maximally_entangled(2);
    EXPECT_NEAR(k2[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(k2[3].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(norm_of(k3.amplitudes()), 1.0, 1e-15);
}

TEST(ConjugateSet, RealSetUnchanged) {
    auto s = load_dataset("yuoh13");
    auto c = conjugate_set(s);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(s.vectors[i][k], c.vectors[i][k]);
}

TEST(ConjugateSet, TwinSwapsCubeRoots) {
    auto s = load_dataset("twin10");
    auto c = conjugate_set(s);
    const Complex a = std::exp(Complex(0, 2 * M_PI / 3));
    // v0 = (1, 0, a^2, a, 0, 1)/2 becomes (1, 0, a, a^2, 0, 1)/2.
    EXPECT_NEAR(std::abs(c.vectors[0][2] - a / 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.vectors[0][3] - a * a / 2.0), 0.0, 1e-15);
    auto cc = conjugate_set(c);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(cc.vectors[i][k], s.vectors[i][k]);
}

TEST(ConjugateSet, PreservesOrthogonalityGraph) {
    std::mt19937_64 rng(9);
    for (const auto& name : catalog::names()) {
        auto s = load_dataset(name);
        EXPECT_TRUE(orthogonality_graph(s).same_structure(orthogonality_graph(conjugate_set(s)))) << name;
    }
    for (int t = 0; t < 50; ++t) {
        ProjectorSet s;
        for (int k = 0; k < 6; ++k) s.add(random_ket(rng, 3));
        EXPECT_TRUE(orthogonality_graph(s).same_structure(orthogonality_graph(conjugate_set(s))));
    }
}
