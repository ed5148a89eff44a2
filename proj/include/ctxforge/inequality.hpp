#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/graph.hpp"
#include "ctxforge/invariants.hpp"
#include "ctxforge/linalg.hpp"
#include "ctxforge/projector_set.hpp"
#include "ctxforge/rational.hpp"

namespace ctxforge {

struct NCInequality {
    WeightedGraph graph;  // weights are the vertex coefficients
    std::vector<Edge> edges;
    std::vector<Rational> edge_coeffs;  // max(w_i, w_j), subtracted
    Rational bound;

    const std::vector<Rational>& vertex_coeffs() const { return graph.weights(); }
};

// One term P(Pi_i^A = 1, Pi_j^B = 1) with its coefficient.
struct BellTerm {
    std::size_t alice = 0, bob = 0;
    Rational coeff;
};

struct BellInequality {
    WeightedGraph graph;
    std::vector<BellTerm> terms;  // diagonal terms first, then both orientations of each edge
    Rational bound;
};

inline NCInequality build_nc_inequality(const WeightedGraph& g) {
    NCInequality q;
    q.graph = g;
    q.edges = g.edges();
    for (auto [i, j] : q.edges) q.edge_coeffs.push_back(std::max(g.weight(i), g.weight(j)));
    q.bound = alpha(g).value;
    return q;
}

inline NCInequality build_nc_inequality(const ProjectorSet& s, const std::vector<Rational>& w) {
    if (w.size() != s.size()) throw WeightArityMismatch("expected " + std::to_string(s.size()) + " weights");
    auto g = orthogonality_graph(s);
    g.set_weights(w);
    return build_nc_inequality(g);
}

inline BellInequality build_bell_inequality(const WeightedGraph& g) {
    BellInequality b;
    b.graph = g;
    for (std::size_t i = 0; i < g.size(); ++i) b.terms.push_back({i, i, g.weight(i)});
    for (auto [i, j] : g.edges()) {
        const Rational half = -std::max(g.weight(i), g.weight(j)) / 2;
        b.terms.push_back({i, j, half});
        b.terms.push_back({j, i, half});
    }
    b.bound = alpha(g).value;
    return b;
}

inline BellInequality build_bell_inequality(const ProjectorSet& s, const std::vector<Rational>& w) {
    if (w.size() != s.size()) throw WeightArityMismatch("expected " + std::to_string(s.size()) + " weights");
    auto g = orthogonality_graph(s);
    g.set_weights(w);
    return build_bell_inequality(g);
}

// ---------------------------------------------------------------------------
// Classical bounds by exhaustive search

struct BruteForceResult {
    Rational value;
    std::vector<std::uint8_t> alice;  // witness assignment
    std::vector<std::uint8_t> bob;    // Bell flavor only
};

namespace detail {

inline constexpr std::size_t kBruteForceLimit = 30;

// Integer coefficients c * scale; throws if any partial sum could overflow.
inline std::pair<std::vector<std::int64_t>, BigInt> integerize(const std::vector<Rational>& values) {
    const BigInt l = lcm_of_denominators(values);
    std::vector<std::int64_t> out;
    BigInt total = 0;
    for (const auto& v : values) {
        const BigInt x = numerator_of(v) * (l / denominator_of(v));
        total += x < 0 ? BigInt(-x) : x;
        out.push_back(x.convert_to<std::int64_t>());
    }
    if (total > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) throw TooLarge("coefficients too large for exhaustive search");
    return {out, l};
}

inline std::vector<std::uint8_t> bits_of(std::uint64_t m, std::size_t n) {
    std::vector<std::uint8_t> a(n);
    for (std::size_t v = 0; v < n; ++v) a[v] = (m >> v) & 1U;
    return a;
}

}  // namespace detail

// max over a in {0,1}^n of sum w_i a_i - sum_E max(w_i,w_j) a_i a_j, by Gray-code
// enumeration with incremental updates.
inline BruteForceResult nchv_bound_bruteforce(const NCInequality& q) {
    const std::size_t n = q.graph.size();
    if (n > detail::kBruteForceLimit) throw TooLarge("exhaustive search supports at most 30 vertices");
    std::vector<Rational> all = q.vertex_coeffs();
    all.insert(all.end(), q.edge_coeffs.begin(), q.edge_coeffs.end());
    auto [ints, scale] = detail::integerize(all);
    std::vector<std::int64_t> w(ints.begin(), ints.begin() + static_cast<long>(n));
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj(n);
    for (std::size_t e = 0; e < q.edges.size(); ++e) {
        auto [i, j] = q.edges[e];
        adj[i].emplace_back(j, ints[n + e]);
        adj[j].emplace_back(i, ints[n + e]);
    }
    std::uint64_t cur = 0, best_mask = 0;
    std::int64_t value = 0, best = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
        const std::size_t v = static_cast<std::size_t>(std::countr_zero(k));
        std::int64_t delta = w[v];
        for (auto [u, c] : adj[v])
            if ((cur >> u) & 1U) delta -= c;
        if ((cur >> v) & 1U) value -= delta;
        else value += delta;
        cur ^= std::uint64_t{1} << v;
        if (value > best || (value == best && cur < best_mask)) {
            best = value;
            best_mask = cur;
        }
    }
    BruteForceResult r;
    r.value = Rational{BigInt(best)} / Rational{scale};
    r.alice = detail::bits_of(best_mask, n);
    return r;
}

// LHV maximum: enumerate Alice's deterministic outputs; Bob's objective is then
// linear, so each of his outputs is 1 exactly when its coefficient is positive.
inline BruteForceResult lhv_bound_bruteforce(const BellInequality& b) {
    const std::size_t n = b.graph.size();
    if (n > detail::kBruteForceLimit) throw TooLarge("exhaustive search supports at most 30 vertices");
    std::vector<Rational> coeffs;
    for (const auto& t : b.terms) coeffs.push_back(t.coeff);
    auto [ints, scale] = detail::integerize(coeffs);
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> row(n);  // alice -> (bob, coeff)
    for (std::size_t k = 0; k < b.terms.size(); ++k) row[b.terms[k].alice].emplace_back(b.terms[k].bob, ints[k]);
    std::vector<std::int64_t> bob_coeff(n, 0);
    std::int64_t positive = 0, best = 0;
    std::uint64_t cur = 0, best_mask = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
        const std::size_t v = static_cast<std::size_t>(std::countr_zero(k));
        const bool on = !((cur >> v) & 1U);
        for (auto [j, c] : row[v]) {
            const std::int64_t before = bob_coeff[j];
            bob_coeff[j] += on ? c : -c;
            positive += std::max<std::int64_t>(bob_coeff[j], 0) - std::max<std::int64_t>(before, 0);
        }
        cur ^= std::uint64_t{1} << v;
        if (positive > best || (positive == best && cur < best_mask)) {
            best = positive;
            best_mask = cur;
        }
    }
    BruteForceResult r;
    r.value = Rational{BigInt(best)} / Rational{scale};
    r.alice = detail::bits_of(best_mask, n);
    r.bob.assign(n, 0);
    std::vector<std::int64_t> c(n, 0);
    for (std::size_t k = 0; k < b.terms.size(); ++k)
        if (r.alice[b.terms[k].alice]) c[b.terms[k].bob] += ints[k];
    for (std::size_t j = 0; j < n; ++j) r.bob[j] = c[j] > 0;
    return r;
}

// ---------------------------------------------------------------------------
// Quantum values

inline double quantum_nc_value(const ProjectorSet& s, const std::vector<Rational>& w, const DensityMatrix& rho) {
    if (w.size() != s.size()) throw WeightArityMismatch("expected " + std::to_string(s.size()) + " weights");
    if (rho.dim() != s.dim) throw DimensionMismatch("state dimension differs from projector dimension");
    const auto g = orthogonality_graph(s);
    std::vector<CMatrix> p;
    for (std::size_t i = 0; i < s.size(); ++i) p.push_back(s.projector(i).matrix());
    double v = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) v += to_double(w[i]) * expectation(rho.matrix(), p[i]);
    for (auto [i, j] : g.edges()) v -= to_double(std::max(w[i], w[j])) * expectation(rho.matrix(), p[i] * p[j]);
    return v;
}

// Tr(R (X tensor Y)) for R on C^d tensor C^d.
inline Complex bipartite_expectation(const CMatrix& r, const CMatrix& x, const CMatrix& y) {
    const std::size_t d = x.rows();
    if (r.rows() != d * d || y.rows() != d) throw DimensionMismatch("bipartite dimensions differ");
    Complex t{};
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t a2 = 0; a2 < d; ++a2) {
                if (x(a2, a) == Complex{}) continue;
                for (std::size_t b2 = 0; b2 < d; ++b2) t += r(a * d + b, a2 * d + b2) * x(a2, a) * y(b2, b);
            }
    return t;
}

inline DensityMatrix entangled_state(std::size_t d) { return DensityMatrix::pure(maximally_entangled(d)); }

inline double quantum_bell_value(const ProjectorSet& sa, const ProjectorSet& sb, const std::vector<Rational>& w,
                                 const DensityMatrix& state) {
    if (sa.size() != sb.size() || sa.dim != sb.dim) throw DimensionMismatch("Alice and Bob sets differ in shape");
    if (w.size() != sa.size()) throw WeightArityMismatch("expected " + std::to_string(sa.size()) + " weights");
    if (state.dim() != sa.dim * sa.dim) throw DimensionMismatch("state is not on C^d tensor C^d");
    auto g = orthogonality_graph(sa);
    g.set_weights(w);
    const auto bell = build_bell_inequality(g);
    double v = 0.0;
    for (const auto& t : bell.terms)
        v += to_double(t.coeff) *
             bipartite_expectation(state.matrix(), sa.projector(t.alice).matrix(), sb.projector(t.bob).matrix()).real();
    return v;
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [0,1) from the counter (seed, round, stream).
inline double counter_uniform(std::uint64_t seed, std::uint64_t round, std::uint64_t stream) {
    const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(round)) + stream);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::size_t pick(const double* probs, std::size_t k, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return k - 1;
}

struct RunningMean {
    double mean = 0.0, m2 = 0.0;
    std::uint64_t n = 0;
    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    double stderr_() const {
        if (n < 2) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

}  // namespace detail

struct SampleEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;  // NaN for a single round
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
};

// Joint Born probabilities P(a, b) for a, b in {0,1}, index 2a + b.
inline std::array<double, 4> joint_outcomes(const CMatrix& state, const CMatrix& x, const CMatrix& y) {
    const std::size_t d = x.rows();
    const CMatrix id = CMatrix::identity(d);
    std::array<double, 4> p{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const CMatrix xa = a ? x : id - x;
            const CMatrix yb = b ? y : id - y;
            p[static_cast<std::size_t>(2 * a + b)] = std::max(0.0, bipartite_expectation(state, xa, yb).real());
        }
    return p;
}

// Each round draws a term uniformly from the support, samples (a, b) from the
// Born rule and scores |support| * coeff * [a = b = 1], an unbiased estimator
// of the Bell expression.
inline SampleEstimate sample_bell_rounds(const DensityMatrix& state, const BellInequality& bell, const ProjectorSet& sa,
                                         const ProjectorSet& sb, std::uint64_t rounds, std::uint64_t seed) {
    if (rounds == 0) throw Error("rounds must be at least 1");
    const std::size_t k = bell.terms.size();
    if (k == 0) throw Error("inequality has no terms");
    std::vector<std::array<double, 4>> joint;
    std::vector<double> coeff;
    for (const auto& t : bell.terms) {
        joint.push_back(joint_outcomes(state.matrix(), sa.projector(t.alice).matrix(), sb.projector(t.bob).matrix()));
        coeff.push_back(to_double(t.coeff));
    }
    detail::RunningMean acc;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const std::size_t term =
            std::min<std::size_t>(k - 1, static_cast<std::size_t>(detail::counter_uniform(seed, r, 0) * static_cast<double>(k)));
        const std::size_t outcome = detail::pick(joint[term].data(), 4, detail::counter_uniform(seed, r, 1));
        acc.add(outcome == 3 ? static_cast<double>(k) * coeff[term] : 0.0);
    }
    return {acc.mean, acc.stderr_(), rounds, seed};
}

// Outcome probabilities of Alice measuring x1 then x2 (Lueders updates on the
// joint state) and Bob measuring y, index 4 a1 + 2 a2 + b.
inline std::array<double, 8> sequential_outcomes(const DensityMatrix& state, const CMatrix& x1, const CMatrix& x2,
                                                 const CMatrix& y) {
    const std::size_t d = x1.rows();
    const CMatrix id = CMatrix::identity(d);
    const Projector p1 = Projector::from_matrix(kron(x1, id));
    const Projector p2 = Projector::from_matrix(kron(x2, id));
    const Projector q = Projector::from_matrix(kron(id, y));
    std::array<double, 8> out{};
    for (int a1 = 0; a1 < 2; ++a1) {
        LudersOutcome s1;
        try {
            s1 = luders_update(state, p1, a1);
        } catch (const ZeroProbabilityBranch&) {
            continue;
        }
        for (int a2 = 0; a2 < 2; ++a2) {
            LudersOutcome s2;
            try {
                s2 = luders_update(s1.state, p2, a2);
            } catch (const ZeroProbabilityBranch&) {
                continue;
            }
            const double pb1 = std::clamp(expectation(s2.state.matrix(), q.matrix()), 0.0, 1.0);
            out[static_cast<std::size_t>(4 * a1 + 2 * a2 + 1)] = s1.probability * s2.probability * pb1;
            out[static_cast<std::size_t>(4 * a1 + 2 * a2)] = s1.probability * s2.probability * (1.0 - pb1);
        }
    }
    return out;
}

struct SequentialSample {
    SampleEstimate nc;
    SampleEstimate bell;
    std::vector<BellTerm> terms;
    std::vector<std::array<std::uint64_t, 8>> tallies;  // per term, outcome 4 a1 + 2 a2 + b
};

// Each round picks a Bell term (i, k). Alice measures Pi_i and then Pi_k (they
// are equal or orthogonal, hence compatible); Bob measures the conjugate of
// Pi_k on his half. Alice's two outcomes feed the noncontextuality estimator,
// her first outcome with Bob's the Bell estimator.
inline SequentialSample sample_sequential_rounds(const ProjectorSet& s, const std::vector<Rational>& w,
                                                 const DensityMatrix& state, std::uint64_t rounds, std::uint64_t seed) {
    if (rounds == 0) throw Error("rounds must be at least 1");
    if (state.dim() != s.dim * s.dim) throw DimensionMismatch("state is not on C^d tensor C^d");
    const auto bell = build_bell_inequality(s, w);
    const auto sb = conjugate_set(s);
    const std::size_t k = bell.terms.size();
    std::vector<std::array<double, 8>> joint;
    std::vector<double> coeff;
    for (const auto& t : bell.terms) {
        joint.push_back(sequential_outcomes(state, s.projector(t.alice).matrix(), s.projector(t.bob).matrix(),
                                            sb.projector(t.bob).matrix()));
        coeff.push_back(to_double(t.coeff));
    }
    SequentialSample out;
    out.terms = bell.terms;
    out.tallies.assign(k, {});
    detail::RunningMean nc, be;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const std::size_t term =
            std::min<std::size_t>(k - 1, static_cast<std::size_t>(detail::counter_uniform(seed, r, 2) * static_cast<double>(k)));
        const std::size_t o = detail::pick(joint[term].data(), 8, detail::counter_uniform(seed, r, 3));
        ++out.tallies[term][o];
        const bool a1 = o & 4U, a2 = o & 2U, b = o & 1U;
        const double scale = static_cast<double>(k) * coeff[term];
        nc.add(a1 && a2 ? scale : 0.0);
        be.add(a1 && b ? scale : 0.0);
    }
    out.nc = {nc.mean, nc.stderr_(), rounds, seed};
    out.bell = {be.mean, be.stderr_(), rounds, seed};
    return out;
}

// ---------------------------------------------------------------------------
// Nonlocal game

struct GameQuestion {
    std::size_t alice = 0, bob = 0;
    Rational probability;
    bool reward_both_one = true;  // win iff a = b = 1; otherwise win iff not (a = b = 1)
};

// game value = scale * inequality value + offset
struct AffineMap {
    Rational scale, offset;
};

struct GameSpec {
    std::vector<GameQuestion> questions;
    AffineMap map;
    Rational classical_value;
    std::optional<double> quantum_value;
};

inline GameSpec to_nonlocal_game(const BellInequality& bell, std::optional<double> quantum_inequality_value = {}) {
    GameSpec g;
    Rational total = 0, negative = 0;
    for (const auto& t : bell.terms) {
        if (t.coeff == 0) continue;
        total += t.coeff > 0 ? t.coeff : Rational{-t.coeff};
        if (t.coeff < 0) negative += -t.coeff;
    }
    if (total == 0) throw Error("inequality has no nonzero terms");
    for (const auto& t : bell.terms) {
        if (t.coeff == 0) continue;
        const Rational mag = t.coeff > 0 ? t.coeff : Rational{-t.coeff};
        g.questions.push_back({t.alice, t.bob, mag / total, t.coeff > 0});
    }
    g.map = {Rational{1} / total, negative / total};
    g.classical_value = g.map.scale * bell.bound + g.map.offset;
    if (quantum_inequality_value)
        g.quantum_value = to_double(g.map.scale) * *quantum_inequality_value + to_double(g.map.offset);
    return g;
}

// Winning probability of deterministic answers.
inline Rational game_value(const GameSpec& g, const std::vector<std::uint8_t>& alice, const std::vector<std::uint8_t>& bob) {
    Rational v = 0;
    for (const auto& q : g.questions) {
        const bool both = alice.at(q.alice) && bob.at(q.bob);
        if (both == q.reward_both_one) v += q.probability;
    }
    return v;
}

// Winning probability of the quantum strategy measuring sa on Alice's side
// and sb on Bob's.
inline double game_value(const GameSpec& g, const ProjectorSet& sa, const ProjectorSet& sb, const DensityMatrix& state) {
    double v = 0.0;
    for (const auto& q : g.questions) {
        const double p11 =
            bipartite_expectation(state.matrix(), sa.projector(q.alice).matrix(), sb.projector(q.bob).matrix()).real();
        v += to_double(q.probability) * (q.reward_both_one ? p11 : 1.0 - p11);
    }
    return v;
}

}  // namespace ctxforge
